"""Exact vanishing tests for top generalized local cohomology over graded Gorenstein rings."""
