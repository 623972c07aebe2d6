"""brandguard: detect and characterize extremist reviewer groups that target
brands in e-commerce review corpora.

Pipeline: ingest a review corpus, mine maximal co-reviewing groups per brand,
compute eight behavioral features per (group, brand) pair, classify pairs as
extremist or moderate with a from-scratch learner suite, and characterize the
two populations. A small HTTP service supports human labeling in between.
"""

__version__ = "0.1.0"
