from ._darklink import Graph, IoError, classify, extract, probe, run_cli

__all__ = ["Graph", "IoError", "classify", "extract", "probe", "run_cli"]
