"""Connected categories and cone semigroups of finite regular semigroups."""

__version__ = "1.0.0"
