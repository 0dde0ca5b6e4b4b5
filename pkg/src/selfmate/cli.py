"""Command-line front end.

Exit codes: 0 solved / pass, 1 not solved / fail, 2 usage or input error.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click

from .board import Color, PositionError, Square, XfenError, parse_xfen, serialize_xfen
from .g3 import DEFAULT_VAR_LIMIT, G3Error, solve_g3, state_from_json
from .gadgets import GadgetError, GadgetKind, build_gadget, harness_xfen, verify_gadget
from .stipulation import SearchOptions, Stipulation, solve
from .unbounded import DEFAULT_CAP, solve_unbounded

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _fail_input(msg: str) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_INPUT)


def _read_source(fen: str | None, path: str | None) -> str:
    if fen is not None and path is not None:
        _fail_input("give either --fen or --input, not both")
    if fen is not None:
        return fen
    if path is None:
        _fail_input("one of --fen or --input is required")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail_input(f"cannot read {path}: {exc.strerror}")
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            return line
    _fail_input(f"{path} holds no position")


def _position(fen, path):
    text = _read_source(fen, path)
    try:
        return parse_xfen(text)
    except XfenError as exc:
        _fail_input(f"bad xFEN: {exc}")
    except PositionError as exc:
        _fail_input(f"illegal position: {exc}")


def _stipulation(text: str, side: Color, allow_bare: bool = False) -> Stipulation:
    if allow_bare and re.fullmatch(r"(?i)(semi-r|s|r)?#", text.strip()):
        text = text.strip() + "1"
    try:
        return Stipulation.parse(text, side)
    except ValueError as exc:
        _fail_input(str(exc))


def _square(text: str | None) -> Square | None:
    if text is None:
        return None
    try:
        return Square.parse(text)
    except ValueError:
        _fail_input(f"bad square {text!r}")


def _board(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    m = re.fullmatch(r"(\d+)x(\d+)", text.strip())
    if not m:
        _fail_input(f"bad board size {text!r}, expected FxR")
    return int(m.group(1)), int(m.group(2))


def _kind(text: str) -> GadgetKind:
    try:
        return GadgetKind(text.lower().replace("-", "_"))
    except ValueError:
        kinds = ", ".join(k.value for k in GadgetKind)
        _fail_input(f"unknown gadget kind {text!r} (one of {kinds})")


fen_option = click.option("--fen", help="Position in xFEN (plain FEN means 8x8).")
input_option = click.option("--input", "input_path", type=click.Path(dir_okay=False),
                            help="File holding the position.")
json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON.")


@click.group()
def cli():
    """Generalized chess problem solver, gadget kit and G3 solver."""


@cli.command("solve")
@fen_option
@input_option
@click.option("--stip", required=True, help="#n, s#n, r#n or semi-r#n.")
@click.option("--max-nodes", type=click.IntRange(min=1), default=5_000_000, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--full-tree", is_flag=True, help="Show every winning continuation.")
@click.option("--all-keys/--first-key", default=True, show_default=True,
              help="Look for cooks or stop at the first key.")
@json_option
def cmd_solve(fen, input_path, stip, max_nodes, workers, full_tree, all_keys, as_json):
    """Solve a stipulated problem; the side to move is the forcing side."""
    p = _position(fen, input_path)
    st = _stipulation(stip, p.side_to_move)
    opts = SearchOptions(node_cap=max_nodes, workers=workers, full_tree=full_tree,
                         first_key_only=not all_keys)
    sol = solve(p, st, opts)
    click.echo(sol.to_json() if as_json else sol.to_text())
    sys.exit(EXIT_OK if sol.solved else EXIT_FAIL)


@cli.command("solve-unbounded")
@fen_option
@input_option
@click.option("--stip", required=True, help="Goal kind: #, s#, r# or semi-r# (a move count is ignored).")
@click.option("--max-nodes", type=click.IntRange(min=1), default=DEFAULT_CAP, show_default=True,
              help="Cap on expanded states.")
@json_option
def cmd_solve_unbounded(fen, input_path, stip, max_nodes, as_json):
    """Decide a forced win with no move limit by state-graph analysis."""
    p = _position(fen, input_path)
    st = _stipulation(stip, p.side_to_move, allow_bare=True)
    res = solve_unbounded(p, st.kind, p.side_to_move, SearchOptions(node_cap=max_nodes))
    click.echo(json.dumps(res.to_dict(), indent=2) if as_json else res.summary())
    sys.exit(EXIT_OK if res.forcing_side_wins else EXIT_FAIL)


@cli.group("gadget")
def gadget():
    """Build, verify and export reduction gadgets."""


anchor_option = click.option("--anchor", help="Square for the gadget's a1 corner.")
board_option = click.option("--board", help="Board size FxR.")


@gadget.command("build")
@click.argument("kind")
@anchor_option
@board_option
@click.option("--xfen", "as_xfen", is_flag=True, help="Emit the harnessed position as xFEN only.")
def cmd_gadget_build(kind, anchor, board, as_xfen):
    """Place a gadget and print its placement as JSON."""
    try:
        g = build_gadget(_kind(kind), _square(anchor), _board(board))
    except GadgetError as exc:
        _fail_input(str(exc))
    if as_xfen:
        click.echo(harness_xfen(g))
    else:
        data = g.to_dict()
        data["xfen"] = harness_xfen(g)
        click.echo(json.dumps(data, indent=2))


@gadget.command("verify")
@click.argument("kind")
@anchor_option
@board_option
@json_option
def cmd_gadget_verify(kind, anchor, board, as_json):
    """Run the check battery; exit 0 iff every check passes."""
    try:
        report = verify_gadget(_kind(kind), _square(anchor), _board(board))
    except GadgetError as exc:
        _fail_input(str(exc))
    click.echo(json.dumps(report.to_dict(), indent=2) if as_json else report.to_text())
    sys.exit(EXIT_OK if report.all_pass else EXIT_FAIL)


@gadget.command("export")
@click.argument("kind")
@anchor_option
@board_option
@click.option("--entry", "with_entry", is_flag=True, help="Include the first entering queen.")
@click.option("--side", type=click.Choice(["w", "b"]), default=None,
              help="Side to move (defaults to white, or the queen's side with --entry).")
def cmd_gadget_export(kind, anchor, board, with_entry, side):
    """Print the harnessed gadget position as xFEN."""
    try:
        g = build_gadget(_kind(kind), _square(anchor), _board(board))
        if with_entry:
            p = g.entry_position(g.entries[0])
            if side is not None and Color(side) is not p.side_to_move:
                _fail_input("--side conflicts with the entering queen's side")
            click.echo(serialize_xfen(p))
        else:
            click.echo(harness_xfen(g, Color(side or "w")))
    except (GadgetError, PositionError) as exc:
        _fail_input(str(exc))


@cli.group("g3")
def g3():
    """The formula game G3."""


@g3.command("solve")
@click.argument("path", required=False, type=click.Path(dir_okay=False))
@click.option("--input", "input_path", type=click.Path(dir_okay=False), help="Instance JSON file.")
@click.option("--limit", type=click.IntRange(min=1), default=DEFAULT_VAR_LIMIT, show_default=True,
              help="Maximum |X| + |Y|.")
@click.option("--no-strict", is_flag=True, help="Allow clauses wider than 12 literals.")
@click.option("--audit", is_flag=True, help="Re-check the computed winning strategy.")
@json_option
def cmd_g3_solve(path, input_path, limit, no_strict, audit, as_json):
    """Decide whether player I forces a win; exit 0 if so, 1 if not."""
    if path and input_path:
        _fail_input("give the instance once")
    src = path or input_path
    if src is None:
        _fail_input("an instance file is required")
    try:
        state = state_from_json(Path(src).read_text(encoding="utf-8"))
        result = solve_g3(state, limit=limit, strict_12dnf=not no_strict)
    except OSError as exc:
        _fail_input(f"cannot read {src}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        _fail_input(f"bad JSON: {exc}")
    except G3Error as exc:
        _fail_input(str(exc))
    audited = result.audit() if audit else None
    if as_json:
        data = result.to_dict()
        if audit:
            data["audit"] = audited
        click.echo(json.dumps(data, indent=2))
    else:
        click.echo(result.describe())
        click.echo(f"states={result.n_states}" + (f" plies={result.rank}" if result.player1_wins else ""))
        if audit:
            click.echo(f"strategy audit: {'ok' if audited else 'FAILED'}")
    ok = result.player1_wins and audited is not False
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


def main(argv=None):
    cli.main(args=argv, prog_name="selfmate")


if __name__ == "__main__":
    main()
