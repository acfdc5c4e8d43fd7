#!/usr/bin/env python3
import logging
import optparse
import sys
from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np
from tabulate import tabulate

from common.errors import (ConfigError, ConnectivityFailure, ConvergenceFailure, DimensionMismatch, GraphletError,
                           InvalidInput, NotConverged)
from common.io import read_json, read_matrix, write_json, write_matrix
from common.log import setup_logging
from graphs import (Graph, LaplacianKind, TimeSeriesMatrix, build_laplacian, correlation_graph, covariance_graph,
                    eigendecompose, kalofolias_solve, knn_graph, semi_local_graph, threshold_graph)
from pipeline import (BenchmarkConfig, fmri_style_evaluation, load_config, pseudo_subject_groups, run_synthetic_benchmark,
                      scale_localization, write_localization)
from wavelets import KernelSpec, build_frame, extract_features, feature_layout, identity_bank, make_bank

__all__ = ["main", "cmd_synth_bench", "cmd_graph_build", "cmd_transform", "cmd_fmri_eval", "GraphBuilder", "BUILDERS"]

logger = logging.getLogger("graphlet")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3

RUNTIME_ERRORS = (ConvergenceFailure, NotConverged, ConnectivityFailure)

usage = "%prog <synth-bench|graph-build|transform|fmri-eval> [opciones]"


class UsageError(Exception):
    """Argumentos de línea de comandos inválidos."""


class _Parser(optparse.OptionParser):
    def error(self, msg):
        raise UsageError(msg)


# Métodos de construcción de grafos

class GraphBuilder(ABC):
    """Un método de graph-build: qué lee (serie temporal o grafo) y cómo construye."""

    name: str
    from_series: bool

    @abstractmethod
    def build(self, data, opts) -> tuple:
        """Devuelve el grafo y un diccionario con los parámetros usados."""
        pass


class CovarianceBuilder(GraphBuilder):
    name = "covariance"
    from_series = True

    def build(self, data, opts):
        return covariance_graph(data), {}


class CorrelationBuilder(GraphBuilder):
    name = "correlation"
    from_series = True

    def build(self, data, opts):
        return correlation_graph(data), {}


class ThresholdBuilder(GraphBuilder):
    name = "threshold"
    from_series = False

    def build(self, data, opts):
        if opts.threshold is None:
            raise InvalidInput("El método threshold necesita --threshold.")
        return threshold_graph(data, opts.threshold, opts.binary), {"threshold": opts.threshold, "binary": opts.binary}


class KnnBuilder(GraphBuilder):
    name = "knn"
    from_series = False

    def build(self, data, opts):
        if opts.k is None:
            raise InvalidInput("El método knn necesita --k.")
        return knn_graph(data, opts.k, opts.binary), {"k": opts.k, "binary": opts.binary}


class SemiLocalBuilder(GraphBuilder):
    name = "semi_local"
    from_series = False

    def build(self, data, opts):
        if opts.coords is None:
            raise InvalidInput("El método semi_local necesita --coords.")
        return semi_local_graph(data, read_matrix(opts.coords)), {"coords": opts.coords}


class KalofoliasBuilder(GraphBuilder):
    name = "kalofolias"
    from_series = True

    def build(self, data, opts):
        learned = kalofolias_solve(data, alpha=opts.alpha, beta=opts.beta, max_iter=opts.max_iter, tol=opts.tol)
        params = {"alpha": opts.alpha, "beta": opts.beta, "max_iter": opts.max_iter, "tol": opts.tol,
                  "converged": learned.converged, "iterations": learned.iterations, "objective": learned.objective}
        return learned.graph, params


BUILDERS = {builder.name: builder for builder in (
    CovarianceBuilder(), CorrelationBuilder(), ThresholdBuilder(), KnnBuilder(), SemiLocalBuilder(),
    KalofoliasBuilder(),
)}


# Subcomandos

def cmd_synth_bench(args) -> int:
    parser = _Parser(usage="%prog synth-bench [config.json] [opciones]", prog="graphlet")
    parser.add_option("-c", "--config", dest="config", help="archivo JSON de configuración")
    parser.add_option("-o", "--output-dir", dest="output_dir", help="directorio de salida de report.csv y report.json")
    parser.add_option("-j", "--jobs", dest="jobs", type="int", default=1, help="procesos en paralelo")
    parser.add_option("--trials", dest="trials", type="int")
    parser.add_option("--nodes", dest="nodes", type="int")
    parser.add_option("--samples", dest="samples", type="int")
    parser.add_option("--seed", dest="seed", type="int")
    parser.add_option("--laplacian", dest="laplacian", choices=[k.value for k in LaplacianKind])
    parser.add_option("-q", "--quiet", dest="quiet", action="store_true", help="no imprimir la tabla")
    opts, rest = parser.parse_args(args)
    if len(rest) > 1:
        raise UsageError("Demasiados argumentos")
    path = rest[0] if rest else opts.config
    if opts.jobs < 1:
        raise ConfigError("jobs", f"debe ser al menos 1, se recibió {opts.jobs}")

    config = load_config(path) if path else BenchmarkConfig()
    config = config.with_overrides(trials=opts.trials, nodes=opts.nodes, samples=opts.samples, seed=opts.seed,
                                   laplacian=opts.laplacian, output_dir=opts.output_dir)
    report = run_synthetic_benchmark(config, jobs=opts.jobs)
    output = Path(config.output_dir)
    report.to_csv(output / "report.csv")
    report.to_json(output / "report.json")
    if not report.trials:
        print(f"ERROR: Los {config.trials} ensayos fallaron; ver {output / 'report.json'}", file=sys.stderr)
        return EXIT_RUNTIME
    if not opts.quiet:
        print(report.to_table())
    return EXIT_OK


def cmd_graph_build(args) -> int:
    methods = ", ".join(BUILDERS)
    parser = _Parser(usage=f"%prog graph-build <método> <entrada.csv> [opciones]\n\nMétodos: {methods}", prog="graphlet")
    parser.add_option("-o", "--output", dest="output", help="CSV de pesos (por defecto <entrada>_<método>.csv)")
    parser.add_option("-t", "--threshold", dest="threshold", type="float")
    parser.add_option("-k", dest="k", type="int")
    parser.add_option("-b", "--binary", dest="binary", action="store_true", default=False)
    parser.add_option("--coords", dest="coords", help="CSV con las coordenadas de los nodos (semi_local)")
    parser.add_option("--alpha", dest="alpha", type="float", default=1.0)
    parser.add_option("--beta", dest="beta", type="float", default=0.0)
    parser.add_option("--max-iter", dest="max_iter", type="int", default=1000)
    parser.add_option("--tol", dest="tol", type="float", default=1e-5)
    opts, rest = parser.parse_args(args)
    if len(rest) != 2:
        raise UsageError("graph-build necesita un método y un archivo de entrada")
    method, source = rest
    if method not in BUILDERS:
        raise ConfigError("method", f"'{method}' no es un método válido ({methods})")
    builder = BUILDERS[method]

    matrix = read_matrix(source)
    data = TimeSeriesMatrix(matrix) if builder.from_series else Graph(matrix)
    graph, params = builder.build(data, opts)
    output = Path(opts.output) if opts.output else Path(source).with_name(f"{Path(source).stem}_{method}.csv")
    write_matrix(output, graph.weights)
    write_json(output.with_suffix(".json"), {
        "method": method,
        "input": str(source),
        "params": params,
        "n_nodes": graph.n_nodes,
        "n_edges": graph.n_edges(),
    })
    logger.info("Grafo %s escrito en %s", graph, output)
    return EXIT_OK


def _parse_param(text: str) -> tuple:
    if "=" not in text:
        raise ConfigError("param", f"'{text}' debe tener la forma clave=valor")
    key, value = text.split("=", 1)
    try:
        values = [float(v) for v in value.split(",")]
    except ValueError:
        raise ConfigError(f"params.{key}", f"'{value}' no es una lista de números") from None
    return key.strip(), values


def cmd_transform(args) -> int:
    parser = _Parser(usage="%prog transform <grafo.csv> <señales.csv> [opciones]", prog="graphlet")
    parser.add_option("-o", "--output", dest="output", help="CSV de features (por defecto <señales>_sgwt.csv)")
    parser.add_option("-f", "--family", dest="family", default="warped_translate")
    parser.add_option("-J", "--bands", dest="bands", type="int", default=4)
    parser.add_option("-p", "--param", dest="params", action="append", default=[], help="parámetro clave=v1,v2,...")
    parser.add_option("-l", "--laplacian", dest="laplacian", default="combinatorial",
                      choices=[k.value for k in LaplacianKind])
    parser.add_option("-a", "--augment", dest="augment", action="store_true", default=False)
    parser.add_option("--identity", dest="identity", action="store_true", default=False,
                      help="banco de una sola banda igual a 1 (depuración)")
    parser.add_option("--show-bank", dest="show_bank", action="store_true", default=False,
                      help="imprimir la respuesta de cada banda en los autovalores")
    opts, rest = parser.parse_args(args)
    if len(rest) != 2:
        raise UsageError("transform necesita el grafo y las señales")
    graph_path, signals_path = rest

    graph = Graph(read_matrix(graph_path))
    signals = read_matrix(signals_path)
    n = graph.n_nodes
    if signals.shape[1] != n and signals.shape == (n, 1):
        signals = signals.T
    if signals.shape[1] != n:
        raise DimensionMismatch(f"(m, {n}) para un grafo de {n} nodos", signals.shape, "las señales")

    spectrum = eigendecompose(build_laplacian(graph, LaplacianKind(opts.laplacian)))
    if opts.identity:
        bank, kernel = identity_bank(), "identity"
    else:
        spec = KernelSpec.from_dict({"family": opts.family, "n_bands": opts.bands,
                                     "params": dict(_parse_param(p) for p in opts.params)})
        bank, kernel = make_bank(spec, spectrum.eigenvalues), spec.to_dict()
    frame = build_frame(spectrum, bank)
    if opts.show_bank:
        print(bank.response_table(spectrum.eigenvalues))

    output = Path(opts.output) if opts.output else Path(signals_path).with_name(f"{Path(signals_path).stem}_sgwt.csv")
    write_matrix(output, extract_features(frame, signals, augment=opts.augment))
    write_json(output.with_suffix(".json"), {
        "kernel": kernel,
        "laplacian": opts.laplacian,
        "n_nodes": n,
        "n_signals": signals.shape[0],
        "band_labels": list(frame.band_labels),
        "augment": opts.augment,
        "columns": feature_layout(frame, augment=opts.augment),
    })
    return EXIT_OK


def _vector(path, what: str) -> np.ndarray:
    matrix = read_matrix(path)
    if 1 not in matrix.shape:
        raise DimensionMismatch("un vector (una fila o una columna)", matrix.shape, what)
    return matrix.ravel()


def cmd_fmri_eval(args) -> int:
    parser = _Parser(usage="%prog fmri-eval <features.csv> <objetivo.csv> [opciones]", prog="graphlet")
    parser.add_option("-g", "--groups", dest="groups", help="CSV con el sujeto de cada muestra")
    parser.add_option("-s", "--subjects", dest="subjects", type="int",
                      help="sin --groups: repartir las muestras en N sujetos contiguos")
    parser.add_option("-n", "--components", dest="components", type="int", default=121)
    parser.add_option("--layout", dest="layout", help="JSON de transform: escribe localization.csv")
    parser.add_option("--test-features", dest="test_features")
    parser.add_option("--test-target", dest="test_target")
    parser.add_option("-o", "--output-dir", dest="output_dir", default="results")
    parser.add_option("-q", "--quiet", dest="quiet", action="store_true", help="no imprimir la tabla")
    opts, rest = parser.parse_args(args)
    if len(rest) != 2:
        raise UsageError("fmri-eval necesita las features y el objetivo")
    if (opts.test_features is None) != (opts.test_target is None):
        raise UsageError("--test-features y --test-target van juntos")

    features = read_matrix(rest[0])
    y = _vector(rest[1], "el objetivo")
    if y.size != features.shape[0]:
        raise DimensionMismatch((features.shape[0],), y.shape, "el objetivo")
    if opts.groups:
        groups = _vector(opts.groups, "los grupos")
    elif opts.subjects:
        groups = pseudo_subject_groups(features.shape[0], opts.subjects)
    else:
        raise UsageError("Hace falta --groups o --subjects")
    holdout = None
    if opts.test_features:
        holdout = (read_matrix(opts.test_features), _vector(opts.test_target, "el objetivo de test"))
    layout = None
    if opts.layout:
        try:
            layout = read_json(opts.layout)["columns"]
        except (ValueError, KeyError, TypeError) as exc:
            raise InvalidInput(f"{opts.layout} no es un layout de transform: {exc}") from None
        if len(layout) != features.shape[1]:
            raise DimensionMismatch((len(layout),), (features.shape[1],), "las columnas del layout")

    result = fmri_style_evaluation(features, y, groups, n_components=opts.components, holdout=holdout)
    output = Path(opts.output_dir)
    write_json(output / "fmri.json", {
        "n_samples": features.shape[0],
        "n_features": features.shape[1],
        "n_components": result.fitted.pca.components.shape[0],
        "folds": result.fold_scores,
        "lambdas": result.lambdas,
        "mean": result.mean,
        "se": result.se,
        "holdout": result.holdout,
    })
    if layout is not None:
        write_localization(output / "localization.csv", scale_localization(result.fitted.feature_weights(), layout))
    if not opts.quiet:
        table = [[name, f"{result.mean[name]:.4f} ± {result.se[name]:.4f}",
                  f"{result.holdout[name]:.4f}" if result.holdout else "-"] for name in result.mean]
        print(tabulate(table, ["Métrica", "CV (media ± SE)", "Test"], tablefmt="fancy_grid"))
    return EXIT_OK


COMMANDS = {
    "synth-bench": cmd_synth_bench,
    "graph-build": cmd_graph_build,
    "transform": cmd_transform,
    "fmri-eval": cmd_fmri_eval,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    setup_logging()
    if not argv or argv[0] in ("-h", "--help"):
        print(usage.replace("%prog", "graphlet"))
        print("\nSubcomandos: " + ", ".join(COMMANDS))
        return EXIT_OK if argv else EXIT_VALIDATION
    command, args = argv[0], argv[1:]
    if command not in COMMANDS:
        print(f"ERROR: Subcomando desconocido '{command}' (válidos: {', '.join(COMMANDS)})", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return COMMANDS[command](args)
    except UsageError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except RUNTIME_ERRORS as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (GraphletError, OSError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
