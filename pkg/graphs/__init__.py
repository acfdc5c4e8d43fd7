from graphs.core import (Graph, Laplacian, LaplacianKind, Spectrum, build_laplacian, eigendecompose, fix_signs, gft,
                         igft, laplacian_quadratic_form)
from graphs.construction import (TimeSeriesMatrix, correlation_graph, covariance_graph, knn_graph, semi_local_graph,
                                 threshold_graph)
from graphs.learning import LearnedGraph, kalofolias_learn, kalofolias_objective, kalofolias_solve

__all__ = [
    "Graph",
    "Laplacian",
    "LaplacianKind",
    "Spectrum",
    "build_laplacian",
    "eigendecompose",
    "fix_signs",
    "gft",
    "igft",
    "laplacian_quadratic_form",
    "TimeSeriesMatrix",
    "covariance_graph",
    "correlation_graph",
    "threshold_graph",
    "knn_graph",
    "semi_local_graph",
    "LearnedGraph",
    "kalofolias_learn",
    "kalofolias_objective",
    "kalofolias_solve",
]
