"""Period matrices of weighted hyperplane arrangements and their closed-form determinants."""

__version__ = "0.1.0"
