"""Auto-arc spaces of fat points, their motivic classes, and auto-Igusa zeta series."""

__version__ = "0.1.0"
