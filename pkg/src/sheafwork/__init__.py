"""sheafwork - exact sheaf cohomology over finite spaces."""

__version__ = "0.1.0"
