"""Writes the Iris measurements as a points CSV (one row per flower, final label column)."""
import sys

from sklearn.datasets import load_iris

data = load_iris()
with open(sys.argv[1], "w") as out:
    out.write("sepal_length,sepal_width,petal_length,petal_width,label\n")
    for row, target in zip(data.data, data.target):
        out.write(",".join(repr(float(v)) for v in row) + f",{int(target) + 1}\n")
