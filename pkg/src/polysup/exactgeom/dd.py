"""Double description method on integer polyhedral cones.

``cone_generators(rows, d)`` returns generators of ``{y in Q^d : r.y <= 0}``:
a list of extreme rays (modulo the lineality space) and a lineality basis.
All arithmetic is on Python ints; vectors are kept primitive.
"""
from __future__ import annotations

from typing import Sequence

from .linalg import primitive


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def cone_generators(rows: Sequence[Sequence[int]], d: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    lin: list[tuple[int, ...]] = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    # each ray carries a bitmask of the processed rows it makes tight
    rays: list[tuple[tuple[int, ...], int]] = []

    for k, a in enumerate(rows):
        bit = 1 << k
        if len(a) != d:
            raise ValueError(f"row of length {len(a)} in a cone of dimension {d}")
        pick = None
        for i, l in enumerate(lin):
            if _dot(a, l) != 0:
                pick = i
                break
        if pick is not None:
            l0 = lin.pop(pick)
            v0 = _dot(a, l0)
            if v0 < 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            new_lin = []
            for l in lin:
                al = _dot(a, l)
                if al:
                    l = primitive([v0 * x - al * y for x, y in zip(l, l0)])
                new_lin.append(l)
            lin = new_lin
            new_rays = []
            for r, z in rays:
                ar = _dot(a, r)
                if ar:
                    r = primitive([v0 * x - ar * y for x, y in zip(r, l0)])
                new_rays.append((r, z | bit))
            # -l0 is tight on every earlier row (it was a lineality direction)
            new_rays.append((tuple(-x for x in l0), bit - 1))
            rays = new_rays
            continue

        pos, negs, kept = [], [], []
        for idx, (r, z) in enumerate(rays):
            s = _dot(a, r)
            if s > 0:
                pos.append((idx, r, z, s))
            elif s < 0:
                negs.append((idx, r, z, s))
                kept.append((r, z))
            else:
                kept.append((r, z | bit))
        if not pos:
            rays = kept
            continue
        need = d - len(lin) - 2
        masks = [z for _, z in rays]
        for ip, rp, zp, sp in pos:
            for jn, rn, zn, sn in negs:
                common = zp & zn
                if common.bit_count() < need:
                    continue
                adjacent = True
                for m, z in enumerate(masks):
                    if m != ip and m != jn and z & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                r = primitive([sp * x - sn * y for x, y in zip(rn, rp)])
                kept.append((r, common | bit))
        rays = kept

    return [r for r, _ in rays], lin
