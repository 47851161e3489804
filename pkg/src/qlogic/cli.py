"""Command-line front end: a thin client over the service handlers.

Each subcommand builds the corresponding request model, dispatches it
(in-process by default, or to a running server via --server), and
renders the response as a line-oriented text report; --json prints the
machine-readable mirror instead. Exit codes: 0 computed (including
"rule fails" findings), 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from typing import Callable, Optional

from pydantic import BaseModel, ValidationError

from .errors import InputError
from .ks import BUNDLED, load_bundled, parse_number
from .service.app import (
    blocks_handler,
    demo_qubit_handler,
    eval_handler,
    ks_check_handler,
    lattice_handler,
)
from .service.schemas import (
    BlocksRequest,
    BlocksResponse,
    DemoQubitRequest,
    DemoQubitResponse,
    EvalRequest,
    EvalResponse,
    KSCheckRequest,
    KSCheckResponse,
    LatticeOpRequest,
    LatticeOpResponse,
    SemanticsReport,
)

_ROUTES: dict[str, tuple[str, Callable, type[BaseModel]]] = {
    "demo-qubit": ("/demo-qubit", demo_qubit_handler, DemoQubitResponse),
    "eval": ("/eval", eval_handler, EvalResponse),
    "meet": ("/lattice/meet", lambda r: lattice_handler("meet", r), LatticeOpResponse),
    "join": ("/lattice/join", lambda r: lattice_handler("join", r), LatticeOpResponse),
    "complement": ("/lattice/complement", lambda r: lattice_handler("complement", r),
                   LatticeOpResponse),
    "blocks": ("/blocks", blocks_handler, BlocksResponse),
    "ks-check": ("/ks-check", ks_check_handler, KSCheckResponse),
}


def _dispatch(command: str, request: BaseModel, server: Optional[str]) -> BaseModel:
    path, handler, response_type = _ROUTES[command]
    if server is None:
        return handler(request)
    url = server.rstrip("/") + path
    payload = request.model_dump_json().encode("utf-8")
    http_request = urllib.request.Request(
        url, data=payload, headers={"Content-Type": "application/json"}, method="POST")
    try:
        with urllib.request.urlopen(http_request) as response:
            body = response.read().decode("utf-8")
    except urllib.error.HTTPError as exc:
        detail = exc.read().decode("utf-8", errors="replace")
        try:
            detail = json.loads(detail).get("detail", detail)
        except (json.JSONDecodeError, AttributeError):
            pass
        raise InputError(f"server rejected the request: {detail}") from None
    except urllib.error.URLError as exc:
        raise InputError(f"cannot reach server {server!r}: {exc.reason}") from None
    return response_type.model_validate_json(body)


# -- argument parsing ---------------------------------------------------------

def parse_state(text: str) -> list[float]:
    """Whitespace-separated decimal or p/q literals, re/im interleaved."""
    tokens = text.split()
    if not tokens:
        raise InputError("state needs at least one component")
    return [parse_number(t) for t in tokens]


def parse_operand(text: str) -> list:
    """Semicolon-separated vectors; each is a ray id or component literals."""
    operand: list = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        tokens = part.split()
        if len(tokens) == 1 and not _looks_numeric(tokens[0]):
            operand.append(tokens[0])
        else:
            operand.append([parse_number(t) for t in tokens])
    if not operand:
        raise InputError("empty subspace operand")
    return operand


def _looks_numeric(token: str) -> bool:
    try:
        parse_number(token)
        return True
    except InputError:
        return False


def _read_space(path: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    return _read_rayfile(path)


def _read_rayfile(path: str) -> str:
    if path.startswith("bundled:"):
        return load_bundled(path.split(":", 1)[1])
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read ray file {path!r}: {exc}") from None


# -- text rendering -----------------------------------------------------------

def _fmt(x: float) -> str:
    return format(x, ".12g")


def _render_semantics(section: SemanticsReport) -> list[str]:
    lines = [f"semantics {section.semantics}"]
    lines += [f"atom {a.label} = {a.value}" for a in section.atoms]
    for rc in section.rules:
        if rc.status == "ok":
            lines.append(f"rule {rc.rule} = ok")
        else:
            lines.append(f"rule {rc.rule} = {rc.status} ({rc.lhs} ≠ {rc.rhs})")
    return lines


def render_demo(resp: DemoQubitResponse) -> str:
    lines = ["demo-qubit state " + " ".join(_fmt(x) for x in resp.state)]
    lines += [f"define {d}" for d in resp.definitions]
    lines += _render_semantics(resp.bivalent)
    lines += _render_semantics(resp.supervaluational)
    return "\n".join(lines) + "\n"


def render_eval(resp: EvalResponse) -> str:
    lines = [f"semantics {resp.semantics}"]
    lines += [f"note {n}" for n in resp.notes]
    lines += [f"atom {a.label} = {a.value}" for a in resp.atoms]
    lines.append(f"formula {resp.formula} = {resp.value}")
    return "\n".join(lines) + "\n"


def render_lattice(resp: LatticeOpResponse) -> str:
    lines = [f"op {resp.op}", f"dim = {resp.result.dim}"]
    if resp.result.basis:
        for i, column in enumerate(resp.result.basis, start=1):
            lines.append(f"basis {i} = " + " ".join(_fmt(x) for x in column))
    else:
        lines.append("basis = (empty)")
    if resp.blocks is not None:
        lines.append("blocks = " + (",".join(resp.blocks) if resp.blocks else "(none)"))
    return "\n".join(lines) + "\n"


def render_blocks(resp: BlocksResponse) -> str:
    lines = [f"blocks {len(resp.blocks)}"]
    for block in resp.blocks:
        lines.append(f"block {block.id} elements {block.elements}")
    lines.append(f"pasted elements {len(resp.elements)}")
    lines.append(f"interlinked {'yes' if resp.interlinked else 'no'}")
    for element in resp.elements:
        lines.append(f"element dim {element.dim} blocks " + ",".join(element.blocks))
    return "\n".join(lines) + "\n"


def render_ks(resp: KSCheckResponse) -> str:
    lines = [
        f"dim = {resp.dim}",
        f"rays = {resp.rays}",
        f"contexts = {resp.contexts}",
        f"status = {resp.status}",
        f"nodes-explored = {resp.nodes_explored}",
    ]
    if resp.colorings is not None:
        lines.append(f"colorings = {resp.colorings}")
    if resp.assignment is not None:
        for rid in sorted(resp.assignment):
            lines.append(f"assign {rid} = {resp.assignment[rid]}")
    if resp.context_list is not None:
        for i, ctx in enumerate(resp.context_list):
            lines.append(f"context c{i} = " + " ".join(ctx))
    return "\n".join(lines) + "\n"


_RENDERERS: dict[str, Callable[[BaseModel], str]] = {
    "demo-qubit": render_demo,
    "eval": render_eval,
    "meet": render_lattice,
    "join": render_lattice,
    "complement": render_lattice,
    "blocks": render_blocks,
    "ks-check": render_ks,
}


# -- command construction -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlogic",
        description="Subspace algebra, Boolean blocks, three valuation engines, "
                    "and Kochen-Specker colorability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tolerance", type=float, default=None,
                       help="comparison epsilon in (0,1); default 1e-9")
        p.add_argument("--json", action="store_true",
                       help="print the machine-readable mirror of the report")
        p.add_argument("--report", default=None, metavar="PATH",
                       help="also write the report to PATH")
        p.add_argument("--server", default=None, metavar="URL",
                       help="send the request to a running qlogic service")

    p = sub.add_parser("demo-qubit", help="two-context qubit walkthrough")
    p.add_argument("--state", default=None,
                   help="qubit state as 're im re im' literals (default '1 0 0 0')")
    common(p)

    p = sub.add_parser("eval", help="evaluate a formula over a ray-file space")
    p.add_argument("space", help="ray file path or bundled:<name>")
    p.add_argument("formula", help="atoms, &, |, !, parentheses, T, F")
    p.add_argument("--state", required=True, help="state components 're im ...'")
    p.add_argument("--semantics", choices=["bivalent", "super", "lukasiewicz"],
                   default="bivalent")
    common(p)

    for op in ("meet", "join"):
        p = sub.add_parser(op, help=f"lattice {op} of two subspaces")
        p.add_argument("a", help="subspace: ray ids or 're im ...' vectors, ';'-separated")
        p.add_argument("b", help="second subspace operand")
        p.add_argument("--space", default=None, help="ray file resolving ray ids")
        common(p)

    p = sub.add_parser("complement", help="orthogonal complement of a subspace")
    p.add_argument("a", help="subspace operand")
    p.add_argument("--space", default=None, help="ray file resolving ray ids")
    common(p)

    p = sub.add_parser("blocks", help="Boolean blocks and pasting of a ray-file space")
    p.add_argument("space", help="ray file path or bundled:<name>")
    common(p)

    p = sub.add_parser("ks-check", help="Kochen-Specker colorability search")
    p.add_argument("file", help="ray file path or bundled:<name> "
                                f"(bundled names: {', '.join(BUNDLED)})")
    p.add_argument("--enumerate-contexts", action="store_true",
                   help="ignore declared contexts and enumerate orthogonality cliques")
    p.add_argument("--count-colorings", action="store_true",
                   help="exhaustively count all consistent colorings")
    common(p)

    p = sub.add_parser("serve", help="run the HTTP service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _build_request(args: argparse.Namespace) -> BaseModel:
    if args.command == "demo-qubit":
        return DemoQubitRequest(
            state=None if args.state is None else parse_state(args.state),
            tolerance=args.tolerance,
        )
    if args.command == "eval":
        return EvalRequest(
            space=_read_rayfile(args.space),
            formula=args.formula,
            state=parse_state(args.state),
            semantics=args.semantics,
            tolerance=args.tolerance,
        )
    if args.command in ("meet", "join"):
        return LatticeOpRequest(
            a=parse_operand(args.a),
            b=parse_operand(args.b),
            space=_read_space(args.space),
            tolerance=args.tolerance,
        )
    if args.command == "complement":
        return LatticeOpRequest(
            a=parse_operand(args.a),
            b=None,
            space=_read_space(args.space),
            tolerance=args.tolerance,
        )
    if args.command == "blocks":
        return BlocksRequest(space=_read_rayfile(args.space), tolerance=args.tolerance)
    if args.command == "ks-check":
        return KSCheckRequest(
            rayfile=_read_rayfile(args.file),
            enumerate_contexts=args.enumerate_contexts,
            count_colorings=args.count_colorings,
            tolerance=args.tolerance,
        )
    raise InputError(f"unknown command {args.command!r}")


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("qlogic.service.app:app", host=args.host, port=args.port)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        return _serve(args)
    try:
        request = _build_request(args)
        response = _dispatch(args.command, request, args.server)
    except (InputError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything past input validation is a broken invariant
        print(f"internal error: {exc}", file=sys.stderr)
        return 2

    for note in getattr(response, "warnings", []):
        print(f"notice: {note}", file=sys.stderr)
    if args.json:
        text = response.model_dump_json(indent=2) + "\n"
    else:
        text = _RENDERERS[args.command](response)
    sys.stdout.write(text)
    if args.report is not None:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write report {args.report!r}: {exc}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
