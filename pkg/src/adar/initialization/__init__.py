"""
Initialization module - K-means clustering and initial rule base construction.
"""

from adar.initialization.builder import cluster_widths, init_rulebase
from adar.initialization.kmeans import KMeansResult, kmeans, kmeans_plusplus

__all__ = [
    "KMeansResult",
    "kmeans",
    "kmeans_plusplus",
    "cluster_widths",
    "init_rulebase",
]
