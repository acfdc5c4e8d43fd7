# Triángulo con una arista negativa: W tiene autovalores {1, 1, -2} y L = 2I - W
__weights__ = [[0, 1, -1], [1, 0, 1], [-1, 1, 0]]

__laplacian__ = [[2, -1, 1], [-1, 2, -1], [1, -1, 2]]

__eigenvalues__ = [1, 1, 4]

__normalized_eigenvalues__ = [0.5, 0.5, 2]
