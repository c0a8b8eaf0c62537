#!/usr/bin/env python3
"""Generate src/mms_source_generated.cpp: the manufactured momentum source

    s = -div eps(u) + grad p - alpha grad(div u)

for the tanh permeability field and the exact (u, p) of the MMS case.
Run from the repository root: python3 tools/gen_mms_source.py
"""
import pathlib

import sympy as sp

x, z, alpha, ks, kS = sp.symbols("x z alpha k_star k_sup", real=True)

k = (kS - ks) / (4 * sp.tanh(5)) * (sp.tanh(10 * x - 5) + sp.tanh(10 * z - 5)) + (kS + ks) / 2
p = -sp.cos(4 * sp.pi * x) * sp.cos(2 * sp.pi * z)
ux = k * sp.diff(p, x) + sp.sin(sp.pi * x) * sp.sin(2 * sp.pi * z) + 2
uz = k * sp.diff(p, z) + sp.Rational(1, 2) * sp.cos(sp.pi * x) * sp.cos(2 * sp.pi * z) + 2

u = sp.Matrix([ux, uz])
X = [x, z]
grad_u = sp.Matrix(2, 2, lambda i, j: sp.diff(u[i], X[j]))
eps = (grad_u + grad_u.T) / 2
div_u = sp.diff(ux, x) + sp.diff(uz, z)

source = [
    -sum(sp.diff(eps[i, j], X[j]) for j in range(2)) + sp.diff(p, X[i]) - alpha * sp.diff(div_u, X[i])
    for i in range(2)
]

subexprs, reduced = sp.cse(source, symbols=sp.numbered_symbols("t"))
lines = []
for sym, expr in subexprs:
    lines.append(f"  const double {sym} = {sp.ccode(expr)};")

out = f"""// Generated by tools/gen_mms_source.py; do not edit.
#include <cmath>

#include "magma/problems.hpp"

namespace magma {{

Vec2 mms_source_value(double x, double z, double alpha, double k_star, double k_sup) {{
{chr(10).join(lines)}
  return {{{sp.ccode(reduced[0])}, {sp.ccode(reduced[1])}}};
}}

}}  // namespace magma
"""
root = pathlib.Path(__file__).resolve().parent.parent
(root / "src" / "mms_source_generated.cpp").write_text(out)
