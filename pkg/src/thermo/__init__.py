"""Thermal operations, coherence damping bounds and finite-bath simulation."""
