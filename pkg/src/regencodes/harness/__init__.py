"""Storage-cluster harness: fragment/message files, the in-process cluster
simulator, operation-count benchmarks, field-size reports and the CLI."""

from .bench import BenchReport, BenchRow, bench_compare, report_to_csv
from .fragio import read_fragment, read_message, symbol_width, write_fragment, write_message
from .reports import field_size_report
from .simulator import ClusterState, CostReport, EventRecord, sim_run

__all__ = [
    "BenchReport",
    "BenchRow",
    "bench_compare",
    "report_to_csv",
    "read_fragment",
    "read_message",
    "symbol_width",
    "write_fragment",
    "write_message",
    "field_size_report",
    "ClusterState",
    "CostReport",
    "EventRecord",
    "sim_run",
]
