"""Command line, file formats, Monte Carlo checks and figures."""
