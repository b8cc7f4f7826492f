"""Compare the compiled kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat 5]``. Prints the best
wall time per kernel and backend, the speedup, and the largest difference
between the two backends' results.
"""
import argparse
import timeit

import numpy as np

from kickedtops._core import _fallback

try:
    from kickedtops._core import _kernels
except ImportError:
    _kernels = None


def _unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def cases():
    rng = np.random.default_rng(0)
    spectra = rng.dirichlet(np.ones(33), size=20_000)
    n, m = 21, 21
    a0 = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    a0 /= np.linalg.norm(a0)
    coupling = np.exp(1j * rng.uniform(0, 2 * np.pi, (n, m)))
    u1, u2 = _unitary(rng, n), _unitary(rng, m)
    return {
        "hyp3f2 at z=1": lambda k: k.hyp3f2_series(1.0, 1.0, 1.5, 2.0, 3.0, 1.0)[0],
        "entropies 20000x33": lambda k: np.concatenate(k.spectral_entropies(spectra)),
        "stepper 21x21, 4000 steps": lambda k: k.factored_trajectory(a0, coupling, u1, u2, 4000),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = {"python": _fallback}
    if _kernels is not None:
        backends["cython"] = _kernels
    else:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':28s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup  max|diff|")
    for name, fn in cases().items():
        times, results = {}, {}
        for label, mod in backends.items():
            results[label] = np.asarray(fn(mod))
            times[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{name:28s} " + " ".join(f"{times[b]:9.4f}s" for b in backends)
        if "cython" in times:
            diff = float(np.max(np.abs(results["python"] - results["cython"])))
            row += f"   {times['python'] / times['cython']:6.1f}x  {diff:.1e}"
        print(row)


if __name__ == "__main__":
    main()
