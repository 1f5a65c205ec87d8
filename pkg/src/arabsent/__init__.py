"""Rule-based sentiment extraction for dialectal Arabic social media text."""

__version__ = "0.1.0"
