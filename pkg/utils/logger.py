#utils/logger.py
import logging
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich import box

# stdout stays machine-readable (JSON, JSONL, CSV)
console = Console(stderr=True)


def _fmt(value) -> str:
    if isinstance(value, complex):
        sign = "+" if value.imag >= 0 else "-"
        return f"{value.real:.6e} {sign} {abs(value.imag):.6e}i"
    if isinstance(value, float):
        return f"{value:.6e}"
    return str(value)


class RunLogger:
    def __init__(self, log_file: Optional[str] = "logs/mesocov.log", level: str = "INFO"):
        self.logger = logging.getLogger("mesocov")
        self.rich_terminal = True
        self.events = []
        self.configure(level=level, log_file=log_file)

    def configure(self, level: str = "INFO", log_file: Optional[str] = None, rich_terminal: bool = True):
        self.rich_terminal = rich_terminal
        self.logger.setLevel(getattr(logging, str(level).upper(), logging.INFO))
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            logging.basicConfig(
                filename=log_file,
                level=self.logger.level,
                format='%(asctime)s - %(levelname)s - %(message)s'
            )

    def _print(self, renderable):
        if self.rich_terminal:
            console.print(renderable)

    def header(self, text: str, style: str = "bold magenta"):
        self._print(Panel(text, style=style, expand=False, box=box.DOUBLE))
        self.logger.info(f"HEADER: {text}")

    def step(self, action: str, detail: str = ""):
        msg = f"[green]{action}[/green]"
        if detail:
            msg += f" [dim]({detail})[/dim]"
        self._print(msg)
        self.logger.info(f"{action} - {detail}")

    def batch_done(self, batch: int, total: int, samples: int):
        self._print(f"[cyan]batch {batch + 1}/{total}[/cyan] [dim]{samples} samples[/dim]")
        self.logger.info(f"batch {batch} of {total} done ({samples} samples)")

    def warning(self, message: str):
        self._print(f"[yellow]warning:[/yellow] {message}")
        self.logger.warning(message)
        self.events.append(message)

    def error(self, message: str):
        self._print(f"[red]error:[/red] {message}")
        self.logger.error(message)

    def term_table(self, title: str, terms: Dict[str, complex], error_bound: Optional[float] = None):
        table = Table(title=title, show_header=True, box=box.SIMPLE)
        table.add_column("Term", style="cyan")
        table.add_column("Value", style="magenta")
        for label, value in terms.items():
            table.add_row(label, _fmt(value))
        if error_bound is not None:
            table.add_row("error_bound", _fmt(float(error_bound)), style="dim")
        self._print(table)
        self.logger.info(f"{title}: " + ", ".join(f"{k}={_fmt(v)}" for k, v in terms.items()))

    def report(self, observable: str, verdict: str, z_score: float, relative: float,
               estimate, prediction, rows: Iterable[Tuple[str, object]] = ()):
        style = "green" if verdict == "PASS" else "red"
        table = Table(show_header=True, box=box.SIMPLE)
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="magenta")
        table.add_row("estimate", _fmt(estimate))
        table.add_row("prediction", _fmt(prediction))
        for label, value in rows:
            table.add_row(label, _fmt(value))
        self._print(Panel.fit(
            f"[bold {style}]{verdict}[/bold {style}]  {observable}\n"
            f"z = {z_score:.3f}   relative deviation = {relative:.3%}",
            border_style=style
        ))
        self._print(table)
        self.logger.info(f"compare {observable}: {verdict} z={z_score:.3f} rel={relative:.4f}")

    def check_table(self, results: Iterable):
        table = Table(title="Self-test", show_header=True, box=box.SIMPLE)
        table.add_column("Check", style="cyan")
        table.add_column("Status")
        table.add_column("Detail", style="dim")
        for r in results:
            status = "[green]ok[/green]" if r.passed else "[red]FAIL[/red]"
            table.add_row(r.name, status, r.detail)
            (self.logger.info if r.passed else self.logger.error)(f"selftest {r.name}: {r.detail}")
        self._print(table)


logger = RunLogger(log_file=None)
