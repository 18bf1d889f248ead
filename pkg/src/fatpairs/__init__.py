"""Fat elements and fat pairs in finite general linear groups."""

__version__ = "0.1.0"
