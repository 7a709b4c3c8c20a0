"""Result records, canonical serialization and the flat CSV schema.

One record per solve.  Records are deterministic: identical inputs produce
byte-identical JSON payloads (wall time is carried outside the hashed payload
and outside the CSV row so cache hits and reruns stay comparable).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Dict, List

SCHEMA_VERSION = "floquet-barrier/1"

CHANNEL_RANGE = range(-4, 5)

CSV_COLUMNS: List[str] = (
    ["schema_version", "axis", "axis_value"]
    + [
        "energy_ev",
        "omega_ev",
        "field_v_per_m",
        "mass_ev",
        "charge_factor",
        "potential_kind",
        "barrier_height_ev",
        "barrier_length",
        "coulomb_strength",
        "inner_radius",
        "offset_v1_ev",
        "half_width",
        "strategy",
        "threshold_regularized",
        "unitarity_deficit",
        "total_transmission",
        "total_reflection",
        "static_transmission",
        "time_averaged_transmission",
        "relative_enhancement",
    ]
    + [f"t_{'m' if n < 0 else 'p'}{abs(n)}" for n in CHANNEL_RANGE]
    + [f"r_{'m' if n < 0 else 'p'}{abs(n)}" for n in CHANNEL_RANGE]
    + ["error"]
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


@dataclass
class ResultRecord:
    """Input echo + solve summary; `payload` is the canonical content."""

    payload: Dict
    wall_time_s: float = 0.0

    @property
    def input_hash(self) -> str:
        return self.payload["input_hash"]

    @property
    def enhancement(self) -> float:
        return self.payload["relative_enhancement"]

    def to_json(self) -> str:
        return json.dumps(self.payload, sort_keys=True, separators=(",", ":"))

    def csv_row(self) -> List[str]:
        p = self.payload
        row = []
        for col in CSV_COLUMNS:
            row.append(_fmt(p.get(col)))
        return row

    @classmethod
    def from_json(cls, text: str, wall_time_s: float = 0.0) -> "ResultRecord":
        return cls(payload=json.loads(text), wall_time_s=wall_time_s)


def input_hash_for(payload: Dict) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def error_record(axis: str, axis_value: float, inputs: Dict, message: str) -> ResultRecord:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "axis": axis,
        "axis_value": axis_value,
        "error": message,
        "input_hash": input_hash_for({"error_inputs": inputs}),
    }
    payload.update({k: v for k, v in inputs.items() if k in CSV_COLUMNS})
    return ResultRecord(payload=payload)


def write_csv(records: List[ResultRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for rec in records:
            fh.write(",".join(rec.csv_row()) + "\n")
