"""FastAPI surface for L-polynomials, analytic limits and background sweeps."""
