"""Crosslingual annotation projection toolkit.

Projects entity annotations from a source-language Brat corpus onto its
translation via embedding-based sentence and word alignment, flags suspect
projections for review, scores projections against gold standards, and
enriches annotations with mapped terminology codes.
"""

__version__ = "0.1.0"
