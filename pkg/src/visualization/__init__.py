"""
Discriminative feature export and a PCA scatter of documents.
"""
from src.visualization.projection import discriminative_features, plot_projection, project_2d, write_matrix

__all__ = ["discriminative_features", "plot_projection", "project_2d", "write_matrix"]
