"""Bivariate copulas, their dependence functionals and non-exchangeability measures."""
