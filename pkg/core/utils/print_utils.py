from typing import Any, Dict, Optional
import json

import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.syntax import Syntax
from rich.table import Table

console = Console()


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    value_str = str(value)
    if len(value_str) > 50:
        value_str = value_str[:47] + "..."
    return value_str


def print_dataframe(df: pd.DataFrame, title: str, max_rows: Optional[int] = 40) -> None:
    """
    Print a DataFrame as a Rich table.

    Args:
        df (pd.DataFrame): The table to print
        title (str): Heading printed above the table
        max_rows (Optional[int]): Rows shown before the table is cut short
    """
    console.print(f"\n[bold blue]{title}[/bold blue]")

    if df.empty:
        console.print("[yellow]No data found[/yellow]")
        return

    table = Table(show_header=True, header_style="bold magenta")
    for column in df.columns:
        table.add_column(str(column))

    shown = df if max_rows is None else df.head(max_rows)
    for _, row in shown.iterrows():
        table.add_row(*[_format_value(value) for value in row])

    console.print(table)
    if len(shown) < len(df):
        console.print(f"[dim]... {len(df) - len(shown)} more rows[/dim]")
    console.print(f"Total rows: {len(df)}")


def print_report(values: Dict[str, Any], title: str = "Report") -> None:
    """
    Print a flat mapping as a two-column Metric/Value table.

    Args:
        values (Dict[str, Any]): Metric names and values
        title (str): Title for the table
    """
    if not values:
        console.print("[yellow]No data found[/yellow]")
        return

    table = Table(title=title, show_header=True, header_style="bold cyan")
    table.add_column("Metric", style="bold")
    table.add_column("Value")
    for key, value in values.items():
        table.add_row(str(key), _format_value(value))
    console.print(table)


def print_json(data: Any, title: str = "JSON Output") -> None:
    """
    Print data as syntax-highlighted JSON inside a panel.

    Args:
        data (Any): Anything json.dumps accepts
        title (str): Title for the output panel
    """
    json_str = json.dumps(data, indent=2, default=str)
    syntax = Syntax(json_str, "json", theme="monokai", line_numbers=False)
    panel = Panel(syntax, title=title, border_style="green")
    console.print(panel)
