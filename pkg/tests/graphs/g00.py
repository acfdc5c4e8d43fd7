# P2 con peso 1
__weights__ = [[0, 1], [1, 0]]

__laplacian__ = [[1, -1], [-1, 1]]

__eigenvalues__ = [0, 2]

__normalized_eigenvalues__ = [0, 2]
