#!/usr/bin/env python3
from os.path import dirname, basename, join
import glob

# Lista de archivos con semillas
seed_files = sorted(basename(filename) for filename in glob.glob(join(dirname(__file__), "seeds/*.txt")))

# Extraemos las semillas de los archivos (una por línea)
seed_lists = []
for file in seed_files:
    with open(join(dirname(__file__), f"seeds/{file}")) as f:
        seed_lists.append([int(line) for line in f.read().splitlines() if line.strip()])


def pytest_generate_tests(metafunc):
    """Genera los tests parametrizados con las listas de semillas"""
    if "seeds" in metafunc.fixturenames:
        metafunc.parametrize("seeds", seed_lists, ids=seed_files)
