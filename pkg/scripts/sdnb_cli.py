#!/usr/bin/env python3
"""
Command line for self-dual normal basis certificates
ff and local constructions, certificate verification, the exhaustive
oracle and YAML batch grids with JUnit output
"""

import os
import sys
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
import yaml
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from certificates import (
    Certificate,
    JobResult,
    ReportGenerator,
    build_document,
    load_document,
    verify_document,
    write_document,
)
from errors import (
    EXIT_OK,
    EXIT_PARAMETERS,
    EXIT_VERIFY_FAILED,
    ParameterError,
    PrecisionError,
    SdnbError,
)
from padic import DEFAULT_GUARD, DEFAULT_PRECISION, LocalBase
from sdnb_finite import brute_force_selfdual, construct_selfdual
from sdnb_local import compose_and_trace, tame_generator, unram_generator, wild_generator

load_dotenv()

console = Console()
logging.basicConfig(
    level=os.getenv("SDNB_LOG_LEVEL", "INFO").upper(),
    format="%(message)s",
    datefmt="[%X]",
    handlers=[RichHandler(console=console)]
)
logger = logging.getLogger("sdnb_cli")

LOCAL_MODES = ("tame", "unram", "wild", "compose")


def _load_config() -> Dict[str, Any]:
    """Load optional defaults from the environment"""
    try:
        return {
            "prec": int(os.getenv("SDNB_PREC", str(DEFAULT_PRECISION))),
            "guard": int(os.getenv("SDNB_GUARD", str(DEFAULT_GUARD))),
            "output_dir": os.getenv("SDNB_OUTPUT_DIR", "."),
            "log_level": os.getenv("SDNB_LOG_LEVEL", "INFO").upper(),
            "jobs": int(os.getenv("SDNB_JOBS", "1")),
        }
    except ValueError as e:
        raise ParameterError(f"invalid SDNB_* environment value: {e}") from e


# ---------------------------------------------------------------------------
# Constructions shared by the commands and batch workers
# ---------------------------------------------------------------------------

def build_local_certificate(mode: str, p: int, f: int = 1, prec: int = DEFAULT_PRECISION,
                            guard: int = DEFAULT_GUARD, d: Optional[int] = None,
                            unram_d: Optional[int] = None, tame_d: Optional[int] = None,
                            trace_diag: bool = False, trace_to: Optional[int] = None) -> Certificate:
    base = LocalBase(p, f, prec, guard)
    if mode in ("tame", "unram") and d is None:
        raise ParameterError(f"local {mode} needs --d")
    if mode == "tame":
        return tame_generator(base, d)
    if mode == "unram":
        return unram_generator(base, d)
    if mode == "wild":
        return wild_generator(base, trace_to)
    if mode == "compose":
        if unram_d is None or tame_d is None:
            raise ParameterError("local compose needs --unram-d and --tame-d")
        generators = []
        if trace_diag:
            if unram_d != tame_d:
                raise ParameterError(f"--trace-diag needs equal degrees, got {unram_d} and {tame_d}")
            generators = [(1, 1)]
        return compose_and_trace(unram_generator(base, unram_d), tame_generator(base, tame_d), generators)
    raise ParameterError(f"unknown local mode {mode!r}")


def build_certificate(job: Dict[str, Any]) -> Certificate:
    """Certificate for one batch job description"""
    mode = job.get("mode")
    if mode == "ff":
        return construct_selfdual(int(job["p"]), int(job.get("m", 1)), int(job["n"]))
    if mode in LOCAL_MODES:
        return build_local_certificate(
            mode, int(job["p"]), int(job.get("f", 1)),
            int(job.get("prec", DEFAULT_PRECISION)), int(job.get("guard", DEFAULT_GUARD)),
            job.get("d"), job.get("unram_d"), job.get("tame_d"),
            bool(job.get("trace_diag", False)), job.get("trace_to"),
        )
    raise ParameterError(f"unknown job mode {mode!r}")


def job_name(job: Dict[str, Any]) -> str:
    if job.get("name"):
        return str(job["name"])
    keys = ("p", "m", "f", "n", "d", "unram_d", "tame_d", "prec")
    parts = [f"{k}{job[k]}" for k in keys if job.get(k) is not None]
    if job.get("trace_diag"):
        parts.append("diag")
    return "-".join([str(job.get("mode", "job"))] + parts)


def run_job(job: Dict[str, Any], out_dir: str) -> JobResult:
    """Build, write and re-verify one job; never raises"""
    name = job_name(job)
    mode = str(job.get("mode", "?"))
    expected_exit = job.get("expect_exit")
    start = time.perf_counter()
    try:
        cert = build_certificate(job)
        document = build_document(cert)
        path = write_document(document, Path(out_dir) / f"{name}.json")
        outcome = verify_document(document)
        elapsed = time.perf_counter() - start
        if expected_exit not in (None, EXIT_OK):
            return JobResult(name, mode, "failed", f"expected exit {expected_exit}, got a certificate",
                             elapsed, str(path), cert.route)
        status = "passed" if outcome.passed else "failed"
        return JobResult(name, mode, status, "; ".join(outcome.messages), elapsed, str(path), cert.route)
    except SdnbError as e:
        elapsed = time.perf_counter() - start
        if expected_exit == e.exit_code:
            return JobResult(name, mode, "passed", f"expected exit {e.exit_code}: {e}", elapsed)
        status = "failed" if e.exit_code == EXIT_VERIFY_FAILED else "error"
        return JobResult(name, mode, status, str(e), elapsed)
    except (KeyError, TypeError, ValueError) as e:
        return JobResult(name, mode, "error", f"malformed job: {e}", time.perf_counter() - start)


def load_grid(path: str) -> List[Dict[str, Any]]:
    """Jobs from a YAML grid, each merged over the grid defaults"""
    try:
        with open(path, encoding="utf-8") as f:
            grid = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ParameterError(f"cannot read grid {path}: {e}") from e
    if isinstance(grid, list):
        grid = {"jobs": grid}
    defaults = grid.get("defaults") or {}
    jobs = grid.get("jobs")
    if not isinstance(jobs, list) or not all(isinstance(j, dict) for j in jobs):
        raise ParameterError(f"grid {path} must list its jobs as mappings under 'jobs'")
    return [{**defaults, **job} for job in jobs]


# ---------------------------------------------------------------------------
# Presentation
# ---------------------------------------------------------------------------

def _fail(e: SdnbError, hint: Optional[str] = None) -> None:
    logger.error(f"{type(e).__name__}: {e}")
    console.print(f"❌ {e}", style="bold red")
    if hint:
        console.print(f"💡 {hint}", style="yellow")
    sys.exit(e.exit_code)


def _show_certificate(document: Dict[str, Any]) -> None:
    body = document["body"]
    table = Table(title=f"{body['mode']} certificate ({body['route']})")
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="green")
    for key, value in sorted(body["parameters"].items()):
        table.add_row(key, str(value))
    verification = body["verification"]
    table.add_row("gram", "identity" if verification["gram"]["passed"] else f"failed at {verification['gram']['failures']}")
    if body["mode"] == "ff":
        table.add_row("normal", str(verification["normal"]))
    else:
        table.add_row("valuation", f"{verification['valuation']} (expected {verification['expected_valuation']})")
        table.add_row("margin", f"{verification['gram']['margin']} digits above p^{verification['gram']['target']}")
        for name in body.get("alternates", {}):
            table.add_row("variant", f"{name} also verified")
        for key, value in sorted(body.get("notes", {}).items()):
            table.add_row(key, str(value))
    for c in body["conventions"]:
        table.add_row("convention", c)
    console.print(table)


def _emit(cert: Certificate, out: Optional[str], default_name: str, html: Optional[str]) -> Dict[str, Any]:
    document = build_document(cert)
    config = click.get_current_context().obj
    path = Path(out) if out else Path(config["output_dir"]) / f"{default_name}.json"
    write_document(document, path)
    if html:
        ReportGenerator().write_html(document, html)
    _show_certificate(document)
    console.print(f"✅ Certificate written to {path}")
    return document


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

@click.group()
@click.option("--log-level", default=None, help="Logging level (default SDNB_LOG_LEVEL or INFO)")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], verbose: bool):
    """Self-dual normal bases of finite fields and of A_{L/K} for p-adic fields"""
    try:
        config = _load_config()
    except SdnbError as e:
        _fail(e)
    if log_level:
        config["log_level"] = log_level.upper()
    elif verbose:
        config["log_level"] = "DEBUG"
    logging.getLogger().setLevel(config["log_level"])
    ctx.obj = config


@cli.command("ff")
@click.option("--p", "p", type=int, required=True, help="Characteristic")
@click.option("--m", "m", type=int, default=1, show_default=True, help="Base degree over F_p")
@click.option("--n", "n", type=int, required=True, help="Extension degree")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Certificate file")
@click.option("--html", type=click.Path(dir_okay=False), default=None, help="HTML summary file")
def cmd_ff(p: int, m: int, n: int, out: Optional[str], html: Optional[str]):
    """Self-dual normal basis of F_{p^(mn)} over F_{p^m}"""
    console.print(Panel.fit(f"🔢 F_{p}^{m * n} over F_{p}^{m}", style="bold blue"))
    try:
        with console.status("Constructing..."):
            cert = construct_selfdual(p, m, n)
        _emit(cert, out, f"ff-p{p}-m{m}-n{n}", html)
    except SdnbError as e:
        _fail(e)


@cli.group("local")
def local_group():
    """Self-dual integral normal bases of A_{L/K} over unramified K"""


def _local_options(fn):
    fn = click.option("--html", type=click.Path(dir_okay=False), default=None, help="HTML summary file")(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Certificate file")(fn)
    fn = click.option("--guard", type=int, default=None, help="Guard digits (default SDNB_GUARD or 8)")(fn)
    fn = click.option("--prec", type=int, default=None, help="p-adic precision N (default SDNB_PREC or 48)")(fn)
    fn = click.option("--f", "f", type=int, default=1, show_default=True, help="Unramified degree of K over Q_p")(fn)
    fn = click.option("--p", "p", type=int, required=True, help="Residue characteristic")(fn)
    return fn


def _run_local(mode: str, name: str, p: int, f: int, prec: Optional[int], guard: Optional[int],
               out: Optional[str], html: Optional[str], **kwargs):
    config = click.get_current_context().obj
    prec = config["prec"] if prec is None else prec
    guard = config["guard"] if guard is None else guard
    console.print(Panel.fit(f"🧮 local {mode} over K of degree {f} over Q_{p}, N={prec}", style="bold blue"))
    try:
        with console.status("Constructing..."):
            cert = build_local_certificate(mode, p, f, prec, guard, **kwargs)
        _emit(cert, out, f"local-{name}-p{p}-f{f}-N{prec}", html)
    except PrecisionError as e:
        _fail(e, f"rerun with --prec {2 * prec}")
    except SdnbError as e:
        _fail(e)


@local_group.command("tame")
@_local_options
@click.option("--d", "d", type=int, required=True, help="Ramification degree, odd and dividing q-1")
def cmd_local_tame(p, f, prec, guard, out, html, d):
    """Tame Kummer extension K(tau^(1/d)), tau = -p"""
    _run_local("tame", f"tame-d{d}", p, f, prec, guard, out, html, d=d)


@local_group.command("unram")
@_local_options
@click.option("--d", "d", type=int, required=True, help="Odd unramified degree")
def cmd_local_unram(p, f, prec, guard, out, html, d):
    """Unramified extension of degree d"""
    _run_local("unram", f"unram-d{d}", p, f, prec, guard, out, html, d=d)


@local_group.command("wild")
@_local_options
@click.option("--trace-to", type=int, default=None, help="Index of the subgroup H (only 1 for q = p)")
def cmd_local_wild(p, f, prec, guard, out, html, trace_to):
    """Degree-q subextension of the second Lubin-Tate division field"""
    _run_local("wild", "wild", p, f, prec, guard, out, html, trace_to=trace_to)


@local_group.command("compose")
@_local_options
@click.option("--unram-d", type=int, required=True, help="Unramified degree")
@click.option("--tame-d", type=int, required=True, help="Tame ramification degree")
@click.option("--trace-diag", is_flag=True, help="Trace down to the fixed field of the diagonal subgroup")
def cmd_local_compose(p, f, prec, guard, out, html, unram_d, tame_d, trace_diag):
    """Compositum of an unramified and a tame extension, optionally traced down"""
    name = f"compose-u{unram_d}-t{tame_d}" + ("-diag" if trace_diag else "")
    _run_local("compose", name, p, f, prec, guard, out, html,
               unram_d=unram_d, tame_d=tame_d, trace_diag=trace_diag)


@cli.command("verify")
@click.option("--in", "path", type=click.Path(dir_okay=False), required=True, help="Certificate file")
def cmd_verify(path: str):
    """Re-check a certificate from its embedded moduli"""
    try:
        document = load_document(path)
        outcome = verify_document(document)
    except SdnbError as e:
        _fail(e)
    table = Table(title=f"Verification of {path}")
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    table.add_row("body_sha256", "✅" if outcome.hash_ok else "❌")
    for check, ok in outcome.checks.items():
        table.add_row(check, "✅" if ok else "❌")
    console.print(table)
    for message in outcome.messages:
        console.print(f"⚠️ {message}", style="yellow")
    if not outcome.passed:
        console.print("❌ Certificate does not verify", style="bold red")
        sys.exit(EXIT_VERIFY_FAILED)
    console.print(f"✅ {outcome.mode}/{outcome.route} certificate verifies")


@cli.command("oracle")
@click.option("--p", "p", type=int, required=True, help="Characteristic")
@click.option("--m", "m", type=int, required=True, help="Degree over F_p")
def cmd_oracle(p: int, m: int):
    """Every self-dual element of F_{p^m} over F_p, by exhaustive search"""
    try:
        found = brute_force_selfdual(p, m)
    except SdnbError as e:
        _fail(e)
    table = Table(title=f"Self-dual elements of F_{p}^{m} over F_{p}")
    table.add_column("#", style="cyan")
    table.add_column("Coefficients (low to high)", style="green")
    for i, x in enumerate(found):
        table.add_row(str(i), str(list(x.key())))
    console.print(table)
    console.print(f"📈 {len(found)} self-dual elements")


@cli.command("batch")
@click.option("--grid", type=click.Path(exists=True, dir_okay=False), required=True, help="YAML job grid")
@click.option("--jobs", "workers", type=int, default=None, help="Worker processes (default SDNB_JOBS or 1)")
@click.option("--junit", type=click.Path(dir_okay=False), default=None, help="JUnit XML report")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None, help="Certificate directory")
def cmd_batch(grid: str, workers: Optional[int], junit: Optional[str], out_dir: Optional[str]):
    """Run a YAML grid of constructions"""
    config = click.get_current_context().obj
    workers = config["jobs"] if workers is None else workers
    out_dir = config["output_dir"] if out_dir is None else out_dir
    if workers < 1:
        _fail(ParameterError(f"--jobs must be positive, got {workers}"))
    try:
        jobs = load_grid(grid)
    except SdnbError as e:
        _fail(e)
    console.print(Panel.fit(f"📋 {len(jobs)} jobs from {grid}, {workers} worker(s)", style="bold blue"))

    results: List[JobResult] = []
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console
    ) as progress:
        task = progress.add_task("Running jobs...", total=len(jobs))
        if workers == 1:
            for job in jobs:
                progress.update(task, description=f"Running {job_name(job)}")
                results.append(run_job(job, out_dir))
                progress.advance(task)
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(run_job, job, out_dir) for job in jobs]
                for future in as_completed(futures):
                    result = future.result()
                    progress.update(task, description=f"Finished {result.name}")
                    results.append(result)
                    progress.advance(task)
    order = {job_name(job): i for i, job in enumerate(jobs)}
    results.sort(key=lambda r: order.get(r.name, len(order)))

    table = Table(title="Batch results")
    table.add_column("Job", style="cyan")
    table.add_column("Route")
    table.add_column("Status")
    table.add_column("Seconds", justify="right")
    table.add_column("Message")
    icons = {"passed": "✅", "failed": "❌", "error": "⚠️"}
    for r in results:
        table.add_row(r.name, r.route or "-", f"{icons[r.status]} {r.status}", f"{r.elapsed:.2f}", r.message)
    console.print(table)

    if junit:
        ReportGenerator().write_junit(results, junit)
    failed = [r for r in results if r.status != "passed"]
    if failed:
        logger.error(f"{len(failed)} of {len(results)} jobs did not pass")
        sys.exit(EXIT_VERIFY_FAILED if any(r.status == "failed" for r in failed) else EXIT_PARAMETERS)
    console.print(f"🎉 All {len(results)} jobs passed")


if __name__ == "__main__":
    cli()
