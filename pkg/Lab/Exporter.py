"""
Writers for every exported artifact. Text files (CSV, DOT) open with a
schema-version comment line; JSON and binary outputs are protobuf messages
whose first field is schema_version.
"""
import sys
import os
import csv
import io
import logging

import numpy as np
from google.protobuf import json_format

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from proto import lab_pb2
import lab_config
from EvaluationCode import monomials
from Tower import coordinate_fiber_sizes


# MARK: Initialize Logger
# Configure logging set-up. We want to log times & types of logs, as well as
# function names & the subsequent message.
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)

CSV_HEADER = f"# lrclab schema_version={lab_config.SCHEMA_VERSION}\n"
DOT_HEADER = f"// lrclab schema_version={lab_config.SCHEMA_VERSION}\n"
SCATTER_COLUMNS = [
    "label", "n", "k", "d", "r", "delta_num", "delta_den", "R_num", "R_den", "btv_ok", "paper_ok", "gv_ok",
    "exact", "d_upper",
]


def message_json(message):
    return json_format.MessageToJson(
        message,
        preserving_proto_field_name=True,
        including_default_value_fields=True,
        indent=2,
    ) + "\n"


def _csv_text(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return CSV_HEADER + buffer.getvalue()


# MARK: Fields and places
def field_csv(description):
    return _csv_text(["m", "modulus_bits", "generator_bits"], [[description.m, description.modulus_bits, description.generator_bits]])


def place_list(places):
    field = places.field
    fibers = []
    for i in range(places.depth + 1):
        sizes = coordinate_fiber_sizes(places, i)
        fibers.append(lab_pb2.CoordinateFibers(
            coordinate=i, values=len(sizes), min_places=min(sizes.values()), max_places=max(sizes.values()),
        ))
    return lab_pb2.PlaceList(
        schema_version=lab_config.SCHEMA_VERSION,
        tower=places.tower.name,
        depth=places.depth,
        places=[lab_pb2.PlaceRecord(index=p.index, coords_hex=[field.to_hex(v) for v in p.coords]) for p in places],
        fibers=fibers,
    )


def places_csv(places):
    field = places.field
    header = ["index"] + [f"x{i}" for i in range(places.depth + 1)]
    return _csv_text(header, [[p.index] + [field.to_hex(v) for v in p.coords] for p in places])


def graph_dot(graph):
    return DOT_HEADER + graph.to_dot()


# MARK: Generator matrices
def generator_matrix_proto(code):
    return lab_pb2.GeneratorMatrix(
        schema_version=lab_config.SCHEMA_VERSION,
        n=code.n,
        k_nominal=code.k_nominal,
        m=code.field.m,
        modulus=code.field.modulus,
        symbols=[int(v) for v in code.generator.view(np.ndarray).reshape(-1)],
    )


def generator_matrix_csv(code):
    """One row per monomial: its exponents, then the hex symbol at each place."""
    field = code.field
    header = ["monomial"] + [str(i) for i in range(code.n)]
    rows = []
    for exponents, row in zip(monomials(code.box), code.generator):
        rows.append([" ".join(str(e) for e in exponents)] + [field.to_hex(v) for v in row])
    return _csv_text(header, rows)


# MARK: Scatter tables
def scatter_csv(rows):
    table = []
    for row in rows:
        p = row.point
        table.append([
            p.label, p.n, p.k, p.d, p.r,
            p.delta.numerator, p.delta.denominator, p.rate.numerator, p.rate.denominator,
            int(row.btv_ok), int(row.improved_ok), int(row.gv_ok),
            int(p.d_exact), "" if p.d_upper is None else p.d_upper,
        ])
    return _csv_text(SCATTER_COLUMNS, table)


# MARK: Files
def write_output(payload, path=None, stream=None):
    """Writes text or bytes to path, or to stream (stdout by default) when no path is given."""
    if path is None:
        stream = stream or sys.stdout
        if isinstance(payload, bytes):
            stream.buffer.write(payload)
        else:
            stream.write(payload)
        return
    mode = "wb" if isinstance(payload, bytes) else "w"
    with open(path, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as handle:
        handle.write(payload)
    logger.info(f"Wrote {path}")


# MARK: Reports
def parameters_csv(params):
    d = params.distance
    header = ["preset", "n", "k", "k_nominal", "r", "d", "d_lower", "d_lower_source", "d_upper", "d_upper_source", "exact", "sampled_floor"]
    row = [params.preset, params.n, params.k, params.k_nominal, params.r, params.d,
           d.d_lower, d.d_lower_source, d.d_upper, d.d_upper_source, int(d.exact), params.sampled_floor]
    return _csv_text(header, [row])


def verification_csv(report):
    rows = [[r.proposition_id, r.q, r.status, r.measured_json, r.witness_json] for r in report.results]
    return _csv_text(["proposition", "q", "status", "measured", "witness"], rows)


def bounds_csv(report):
    header = ["r", "q", "delta_num", "delta_den", "btv", "improved", "gv", "gv_minimiser"]
    row = [report.r, report.q, report.delta_num, report.delta_den,
           repr(report.btv), repr(report.improved), repr(report.gv), repr(report.gv_minimiser)]
    return _csv_text(header, [row])


def repair_csv(demo):
    header = ["preset", "position", "erased", "repaired", "fiber", "ok"]
    row = [demo.preset, demo.position, demo.erased_hex, demo.repaired_hex, " ".join(str(i) for i in demo.fiber), int(demo.ok)]
    return _csv_text(header, [row])
