__all__ = [
    "GraphletError",
    "InvalidInput",
    "AsymmetricInput",
    "IsolatedNode",
    "DimensionMismatch",
    "ConvergenceFailure",
    "NegativeArgument",
    "DegenerateSpectrum",
    "InadmissibleCoefficients",
    "TooFewTranslates",
    "NonpositiveLambdaMax",
    "EmptyEvalPoints",
    "SpectrumExceedsCalibration",
    "NotTight",
    "DegenerateSeries",
    "KTooLarge",
    "DisconnectedAtAnyThreshold",
    "NotConverged",
    "ConnectivityFailure",
    "KOutOfRange",
    "ConstantFeature",
    "TooManyComponents",
    "FoldTooSmall",
    "ConstantInput",
    "ConfigError",
    "MatrixParseError",
]


class GraphletError(ValueError):
    """Error base de la librería. Hereda de ValueError para no romper a quien ya la captura."""


class InvalidInput(GraphletError):
    """La entrada no cumple las precondiciones de la operación."""


class AsymmetricInput(GraphletError):
    """La matriz de pesos no es simétrica o su diagonal no es nula."""


class IsolatedNode(GraphletError):
    """Algún nodo tiene grado nulo y la operación necesita dividir por él."""

    def __init__(self, nodes):
        self.nodes = list(nodes)
        super().__init__(f"Los nodos {self.nodes} tienen grado 0.")


class DimensionMismatch(GraphletError):
    """Las dimensiones de los operandos no son compatibles."""

    def __init__(self, expected, actual, what: str = "la señal"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimensiones incompatibles para {what}: se esperaba {expected} y se recibió {actual}.")


class ConvergenceFailure(GraphletError):
    """El solver de autovalores no convergió."""

    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = residual
        super().__init__(f"{message} (residuo: {residual:.3e})")


class NegativeArgument(GraphletError):
    """Un kernel espectral se evaluó en un argumento negativo."""


class DegenerateSpectrum(GraphletError):
    """El espectro no tiene al menos dos autovalores distintos."""


class InadmissibleCoefficients(GraphletError):
    """Los coeficientes del coseno no generan un marco ajustado."""


class TooFewTranslates(GraphletError):
    """Se pidieron menos traslaciones de las necesarias."""


class NonpositiveLambdaMax(GraphletError):
    """El máximo del espectro debe ser positivo."""


class EmptyEvalPoints(GraphletError):
    """No hay puntos donde evaluar las cotas del marco."""


class SpectrumExceedsCalibration(GraphletError):
    """El espectro supera el λ_max con el que se calibró el banco de kernels."""


class NotTight(GraphletError):
    """El marco no es ajustado y no admite la reconstrucción directa."""

    def __init__(self, lower: float, upper: float, tol: float):
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"El marco no es ajustado: A={lower:.6g}, B={upper:.6g}, B/A-1 supera {tol:g}. "
            f"Hace falta una reconstrucción por mínimos cuadrados."
        )


class DegenerateSeries(GraphletError):
    """Alguna columna de la serie temporal es constante."""


class KTooLarge(GraphletError):
    """El k pedido no es menor que la cantidad de nodos."""


class DisconnectedAtAnyThreshold(GraphletError):
    """Ningún umbral de distancia deja el grafo conexo."""


class NotConverged(GraphletError):
    """Un solver iterativo agotó las iteraciones sin llegar a la tolerancia."""

    def __init__(self, solver: str, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"{solver} no convergió en {iterations} iteraciones (residuo: {residual:.3e}).")


class ConnectivityFailure(GraphletError):
    """No se obtuvo un grafo conexo tras todos los remuestreos."""


class KOutOfRange(GraphletError):
    """El k de la selección no está entre 1 y la cantidad de features."""


class ConstantFeature(GraphletError):
    """Una feature constante no tiene correlación definida."""


class TooManyComponents(GraphletError):
    """Se pidieron más componentes principales que las disponibles."""


class FoldTooSmall(GraphletError):
    """Algún fold de validación cruzada quedó demasiado chico."""


class ConstantInput(GraphletError):
    """La correlación de Pearson no está definida para entradas constantes."""


class ConfigError(GraphletError):
    """Configuración inválida. Guarda la clave responsable."""

    def __init__(self, key: str, message: str):
        self.key = key
        self.message = message
        super().__init__(f"Configuración inválida en '{key}': {message}")


class MatrixParseError(GraphletError):
    """Una celda del CSV no se pudo interpretar. Fila y columna empiezan en 1."""

    def __init__(self, path, row: int, column: int, message: str):
        self.path = path
        self.row = row
        self.column = column
        super().__init__(f"{path}: fila {row}, columna {column}: {message}")
