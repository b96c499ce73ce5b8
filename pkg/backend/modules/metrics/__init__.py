from .confusion import ConfusionMatrix, MetricReport, confusion, evaluate, format_metric, report
from .results import BenchRow, append_csv_row, read_csv_rows

__all__ = [
    'ConfusionMatrix', 'MetricReport', 'confusion', 'evaluate', 'report',
    'BenchRow', 'append_csv_row', 'format_metric', 'read_csv_rows',
]
