import dataclasses
import re
from typing import Any, Iterable, List, Optional, Type, Union


def camel_to_snake(name):
    """
    Convert CamelCase to snake_case.

    Examples
    --------
    >>> camel_to_snake("CamelCase")
    'camel_case'
    >>> camel_to_snake("HolderRow")
    'holder_row'
    """
    s1 = re.sub("(.)([A-Z][a-z]+)", r"\1_\2", name)
    return re.sub("([a-z0-9])([A-Z])", r"\1_\2", s1).lower()


def table(name_or_class: Optional[Union[str, Type[Any]]] = None):
    """A decorator that turns a dataclass into a report row type.

    Reports in laurentcf are lists of row instances. The decorator attaches the
    helpers that render such a list as a :class:`pandas.DataFrame` or CSV text, with
    one column per dataclass field in declaration order.

    Parameters
    ----------
    name : Optional[str], default=None
        Table name. If None, the snake_case class name is used.

    Methods Added
    ------------
    columns() : classmethod
        Field names in declaration order.
    frame(rows) : classmethod
        ``pandas.DataFrame`` with one row per instance.
    to_csv(rows, path_or_buf=None) : classmethod
        CSV text (or write to ``path_or_buf``), no index column.
    as_dict() : instancemethod
        Shallow field dict.

    Raises
    ------
    TypeError
        If the decorated class is not a dataclass.

    Examples
    --------
    >>> from dataclasses import dataclass
    >>> @table
    ... @dataclass
    ... class Point:
    ...     x: int
    ...     y: int
    >>> Point.table_name
    'point'
    >>> Point.frame([Point(1, 2), Point(3, 4)])["y"].tolist()
    [2, 4]
    >>> print(Point.to_csv([Point(1, 2)]).strip())
    x,y
    1,2
    """

    if isinstance(name_or_class, str):
        cls = None
        name = name_or_class.lower()
    else:
        cls = name_or_class
        name = None

    def decorator(cls):
        if not dataclasses.is_dataclass(cls):
            raise TypeError(f"{cls} is not a dataclass")

        table_name = name or camel_to_snake(cls.__name__)
        fields = [f.name for f in dataclasses.fields(cls)]

        @classmethod
        def columns(cls) -> List[str]:
            return list(fields)

        @classmethod
        def frame(cls, rows: Iterable[Any]):
            import pandas as pd

            records = [[getattr(row, f) for f in fields] for row in rows]
            return pd.DataFrame.from_records(records, columns=fields)

        @classmethod
        def to_csv(cls, rows: Iterable[Any], path_or_buf=None):
            return cls.frame(rows).to_csv(path_or_buf, index=False)

        def as_dict(self):
            return {f: getattr(self, f) for f in fields}

        setattr(cls, "table_name", table_name)
        setattr(cls, "columns", columns)
        setattr(cls, "frame", frame)
        setattr(cls, "to_csv", to_csv)
        setattr(cls, "as_dict", as_dict)

        return cls

    if cls is not None:
        return decorator(cls)
    return decorator
