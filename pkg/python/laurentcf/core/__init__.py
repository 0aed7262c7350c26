"""
Core Reporting Module

Spec
----
This module exposes the row/table machinery every report in laurentcf is built from.

Responsibilities:
1.  Define the `table` decorator that maps report dataclasses to tabular output.
2.  Render row lists as pandas DataFrames or CSV text.

Public Interfaces:
- `table`: Decorator to define report rows.
- `camel_to_snake`: Name helper used for default table names.
"""

from .table import camel_to_snake, table

__all__ = ["table", "camel_to_snake"]
