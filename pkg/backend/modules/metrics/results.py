"""Append-only CSV of evaluation rows."""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from config import settings

from .confusion import ConfusionMatrix, MetricReport, format_metric


def _parse_metric(text: str) -> Optional[float]:
    return None if text == settings.UNDEFINED_TEXT else float(text)


@dataclass(frozen=True)
class BenchRow:
    classifier: str
    seed: int
    params: str
    cm: ConfusionMatrix
    accuracy: Optional[float]
    sensitivity: Optional[float]
    precision: Optional[float]
    wall_time_ms: int

    @classmethod
    def from_report(cls, classifier: str, seed: int, params: str,
                    cm: ConfusionMatrix, rep: MetricReport, wall_time_ms: int) -> 'BenchRow':
        return cls(classifier, seed, params, cm, rep.accuracy, rep.sensitivity,
                   rep.precision, int(wall_time_ms))

    def values(self) -> List[str]:
        return [
            self.classifier, str(self.seed), self.params,
            str(self.cm.tp), str(self.cm.tn), str(self.cm.fp), str(self.cm.fn),
            format_metric(self.accuracy), format_metric(self.sensitivity),
            format_metric(self.precision), str(self.wall_time_ms),
        ]

    def metric_values(self) -> List[str]:
        """Every column except wall time, which varies run to run."""
        return self.values()[:-1]


def append_csv_row(path: Union[str, Path], row: BenchRow) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    new_file = not path.exists() or path.stat().st_size == 0
    with open(path, 'a', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        if new_file:
            writer.writerow(settings.CSV_HEADER)
        writer.writerow(row.values())


def read_csv_rows(path: Union[str, Path]) -> List[BenchRow]:
    with open(path, encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != settings.CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header}")
        rows = []
        for values in reader:
            if not values:
                continue
            cm = ConfusionMatrix(int(values[3]), int(values[4]), int(values[5]), int(values[6]))
            rows.append(BenchRow(
                values[0], int(values[1]), values[2], cm,
                _parse_metric(values[7]), _parse_metric(values[8]), _parse_metric(values[9]),
                int(values[10]),
            ))
        return rows
