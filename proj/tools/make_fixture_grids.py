#!/usr/bin/env python3
"""Writes the SimBench-dialect grids shipped in data/simbench and tests/fixtures/grids.

The grids are synthetic stand-ins shaped like the rural SimBench codes: a 20 kV
supply with 0.4 kV feeders of NAYY 4x150 cable, and an MV ring feeding four LV
subgrids. Output is deterministic; rerun after editing and commit the result.
"""

import math
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent

NAYY = ("NAYY_4x150SE_0.6/1kV", 0.2067, 0.0804, 0.27)  # ohm/km, ohm/km, kA
NA2XS2Y = ("NA2XS2Y_1x185_RM/25_12/20kV", 0.161, 0.117, 0.362)
TRAFO_LV_160 = ("0.16_MVA_20/0.4_kV", 0.16, 20.0, 0.4, 4.0, 2.35)  # sR, vmHV, vmLV, vmImp %, pCu kW
TRAFO_LV_400 = ("0.4_MVA_20/0.4_kV", 0.4, 20.0, 0.4, 4.0, 4.6)
TRAFO_HV_MV = ("40_MVA_110/20_kV", 40.0, 110.0, 20.0, 12.0, 150.0)


class Grid:
    def __init__(self):
        self.nodes = []  # (id, vn, x, y, subnet)
        self.lines = []  # (id, a, b, type, length_km, subnet)
        self.trafos = []  # (id, hv, lv, type, subnet)
        self.loads = []  # (id, node, subnet)
        self.slack = None
        self.line_types = {}
        self.trafo_types = {}

    def node(self, nid, vn, x, y, subnet):
        self.nodes.append((nid, vn, round(x, 3), round(y, 3), subnet))
        return nid

    def line(self, lid, a, b, ltype, length_km, subnet):
        self.line_types[ltype[0]] = ltype
        self.lines.append((lid, a, b, ltype[0], round(length_km, 4), subnet))

    def trafo(self, tid, hv, lv, ttype, subnet):
        self.trafo_types[ttype[0]] = ttype
        self.trafos.append((tid, hv, lv, ttype[0], subnet))

    def write(self, target):
        target.mkdir(parents=True, exist_ok=True)

        def emit(name, header, rows):
            text = ";".join(header) + "\n" + "".join(";".join(str(v) for v in r) + "\n" for r in rows)
            (target / name).write_text(text, encoding="utf-8")

        coord = {n[0]: f"c_{n[0]}" for n in self.nodes}
        volt_lvl = {0.4: 7, 20.0: 5, 110.0: 3}
        emit("Node.csv", ["id", "type", "vmSetp", "vaSetp", "vmInit", "vaInit", "vmR", "vmMin", "vmMax", "substation",
                          "coordID", "subnet", "voltLvl"],
             [(n[0], "busbar", "", "", 1, 0,
               n[1], 0.9, 1.1, "", coord[n[0]], n[4], volt_lvl[n[1]]) for n in self.nodes])
        emit("Coordinates.csv", ["id", "x", "y", "subnet", "voltLvl"],
             [(coord[n[0]], n[2], n[3], n[4], volt_lvl[n[1]]) for n in self.nodes])
        slack = next(n for n in self.nodes if n[0] == self.slack)
        emit("ExternalNet.csv", ["id", "type", "node", "calc_type", "dspf", "pExtNet", "qExtNet", "subnet", "voltLvl"],
             [("ext_grid", "Slack", slack[0], "vavm", 1, "", "", slack[4], volt_lvl[slack[1]])])
        emit("LineType.csv", ["id", "r", "x", "b", "iMax", "type"],
             [(t[0], t[1], t[2], 0, t[3], "cable") for t in sorted(self.line_types.values())])
        emit("Line.csv", ["id", "nodeA", "nodeB", "type", "length", "loadingMax", "subnet", "voltLvl"],
             [(ln[0], ln[1], ln[2], ln[3], ln[4], 100, ln[5], 7 if "LV" in ln[5] else 5) for ln in self.lines])
        emit("TransformerType.csv", ["id", "sR", "vmHV", "vmLV", "va0", "vmImp", "pCu", "pFe", "iNoLoad", "tapable"],
             [(t[0], t[1], t[2], t[3], 150, t[4], t[5], 0, 0, 0) for t in sorted(self.trafo_types.values())])
        emit("Transformer.csv", ["id", "nodeHV", "nodeLV", "type", "tappos", "autoTap", "loadingMax", "subnet", "voltLvl"],
             [(t[0], t[1], t[2], t[3], 0, 0, 100, t[4], 6 if "LV" in t[4] else 4) for t in self.trafos])
        emit("Load.csv", ["id", "node", "profile", "pLoad", "qLoad", "sR", "subnet", "voltLvl"],
             [(ld[0], ld[1], "H0-A", 0.0035, 0.0011, 0.0037, ld[2], 7) for ld in self.loads])


def lv_subgrid(g, prefix, subnet, mv_node, origin, trafo_type, feeders, spacing_m, loads_at):
    """Radial LV subgrid below `mv_node`; feeders are lists of bus counts, loads_at maps
    (feeder, bus) -> number of load records (default 1)."""
    ox, oy = origin
    bus0 = g.node(f"{prefix}.bus0", 0.4, ox, oy, subnet)
    g.trafo(f"{prefix}.trafo", mv_node, bus0, trafo_type, subnet)
    count = 0
    for f, n_bus in enumerate(feeders):
        angle = 2 * math.pi * f / len(feeders) + 0.3
        prev = bus0
        for b in range(1, n_bus + 1):
            # slight bend so Euclidean distances differ and the layout is not collinear
            x = ox + spacing_m * b * math.cos(angle) + 6.0 * math.sin(b)
            y = oy + spacing_m * b * math.sin(angle) + 6.0 * math.cos(1.7 * b)
            bus = g.node(f"{prefix}.f{f + 1}.b{b:02d}", 0.4, x, y, subnet)
            px, py = next((n[2], n[3]) for n in g.nodes if n[0] == prev)
            g.line(f"{prefix}.f{f + 1}.l{b:02d}", prev, bus, NAYY, math.hypot(x - px, y - py) / 1000.0, subnet)
            for _ in range(loads_at.get((f, b), 1)):
                count += 1
                g.loads.append((f"{prefix}.load{count:03d}", bus, subnet))
            prev = bus
    return count


def lv_rural1():
    g = Grid()
    mv = g.node("MV1.bus0", 20.0, 0.0, -60.0, "MV1.101")
    g.slack = mv
    # 11 buses on two feeders; two buses carry two load records each -> 13 households
    lv_subgrid(g, "LV1.101", "LV1.101", mv, (0.0, 0.0), TRAFO_LV_160, [6, 5], 38.0, {(0, 3): 2, (1, 2): 2})
    assert len(g.loads) == 13
    return g


def mv_rural_ring():
    g = Grid()
    hv = g.node("HV1.bus0", 110.0, 0.0, -400.0, "HV1.101")
    g.slack = hv
    mv0 = g.node("MV1.bus0", 20.0, 0.0, 0.0, "MV1.101")
    g.trafo("HV1.trafo", hv, mv0, TRAFO_HV_MV, "MV1.101")
    radius = 1500.0
    ring = [mv0]
    for k in range(1, 9):
        a = -math.pi / 2 + 2 * math.pi * k / 9
        ring.append(g.node(f"MV1.bus{k}", 20.0, radius * math.cos(a), radius + radius * math.sin(a), "MV1.101"))
    coords = {n[0]: (n[2], n[3]) for n in g.nodes}
    for k in range(9):
        a, b = ring[k], ring[(k + 1) % 9]
        g.line(f"MV1.line{k + 1}", a, b, NA2XS2Y, math.dist(coords[a], coords[b]) / 1000.0 * 1.2, "MV1.101")
    subgrids = [
        ("LV1.101", 2, TRAFO_LV_160, [7, 6], {}),
        ("LV1.102", 4, TRAFO_LV_160, [6, 6], {(0, 2): 2}),
        ("LV1.103", 6, TRAFO_LV_400, [13, 12, 12], {}),
        ("LV1.104", 8, TRAFO_LV_400, [12, 12, 11], {(1, 5): 2, (2, 7): 2}),
    ]
    for name, at, ttype, feeders, extra in subgrids:
        mx, my = coords[ring[at]]
        scale = math.hypot(mx, my - radius) or 1.0
        origin = (mx + 250.0 * mx / scale, my + 250.0 * (my - radius) / scale)
        lv_subgrid(g, name, name, ring[at], origin, ttype, feeders, 35.0, extra)
    assert len(g.loads) == 100, len(g.loads)
    return g


def small(n_loads, feeder_m):
    g = Grid()
    mv = g.node("MV1.bus0", 20.0, 0.0, -40.0, "MV1.101")
    g.slack = mv
    bus0 = g.node("LV1.bus0", 0.4, 0.0, 0.0, "LV1.101")
    g.trafo("LV1.trafo", mv, bus0, TRAFO_LV_160, "LV1.101")
    prev = bus0
    for k in range(1, n_loads + 1):
        bus = g.node(f"LV1.bus{k}", 0.4, feeder_m * k, 5.0 * k, "LV1.101")
        g.line(f"LV1.line{k}", prev, bus, NAYY, math.hypot(feeder_m, 5.0) / 1000.0, "LV1.101")
        g.loads.append((f"LV1.load{k}", bus, "LV1.101"))
        prev = bus
    return g


if __name__ == "__main__":
    lv_rural1().write(ROOT / "data/simbench/lv-rural1")
    mv_rural_ring().write(ROOT / "data/simbench/mv-rural-ring")
    small(2, 30.0).write(ROOT / "tests/fixtures/grids/two-household")
    small(1, 25.0).write(ROOT / "tests/fixtures/grids/single-prosumer")
