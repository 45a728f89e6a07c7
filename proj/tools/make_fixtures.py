"""Regenerates the surface tables and the Bloch-sphere family in fixtures/."""

import json
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def write_surface(name, R, E0, E1, d01, length="bohr", energy="hartree", provenance="analytic"):
    path = HERE / name
    with open(path, "w") as f:
        f.write("R,E0,E1,d01\n")
        for row in zip(R, E0, E1, d01):
            f.write(",".join(repr(float(v)) for v in row) + "\n")
    with open(str(path) + ".units.json", "w") as f:
        json.dump({"length": length, "energy": energy, "provenance": provenance}, f, indent=2)
        f.write("\n")


def two_state(R, a, c):
    # adiabats of [[aR, c], [c, -aR]]
    w = np.sqrt((a * R) ** 2 + c**2)
    return -w, w, a * c / (2.0 * w**2)


def main():
    HERE.mkdir(exist_ok=True)
    R = np.linspace(-3.0, 3.0, 121)
    k = 0.05
    write_surface("harmonic_uncoupled.csv", R, 0.5 * k * R**2, 0.5 * k * R**2 + 0.2, np.zeros_like(R))

    R = np.linspace(-10.0, 10.0, 201)
    write_surface("flat.csv", R, np.zeros_like(R), np.full_like(R, 0.1), np.zeros_like(R))

    E0, E1, d = two_state(R, 0.005, 0.0035)
    write_surface("crossing.csv", R, E0, E1, d)

    # Morse ground state with an uncoupled excited state, in angstrom / eV
    R = np.linspace(0.8, 4.0, 161)
    De, a, Re = 4.0, 1.9, 1.6
    m0 = De * (1.0 - np.exp(-a * (R - Re))) ** 2 - De
    m1 = m0 + 0.5 + 2.0 * np.exp(-1.2 * (R - Re))
    write_surface("morse.csv", R, m0, m1, np.zeros_like(R), length="angstrom", energy="ev")

    bloch = {
        "name": "bloch_sphere",
        "n_qubits": 1,
        "n_params": 3,
        "units": {"energy": "hartree", "length": "bohr"},
        "terms": [
            {"pauli": "X", "coeff": {"poly": [0.0, -1.0], "param": 0}},
            {"pauli": "Y", "coeff": {"poly": [0.0, -1.0], "param": 1}},
            {"pauli": "Z", "coeff": {"poly": [0.0, -1.0], "param": 2}},
        ],
    }
    with open(HERE / "bloch_sphere.json", "w") as f:
        json.dump(bloch, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
