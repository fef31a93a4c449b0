"""Operator CLI: serve the API, validate/ingest knowledge, export sessions,
and run the scripted demo round."""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

import yaml

from ..errors import EngineError
from ..knowledge import GestureExemplar, load_knowledge_base, validate_exemplar
from ..session import SessionStore, export_session
from .config import DEFAULT_EMBED_DIM, DEFAULT_PORT, EngineConfig, packaged_fixture


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kb", default=None, help="knowledge base document path")
    parser.add_argument("--scenarios", default=None, help="scenario catalog path")
    parser.add_argument("--data-dir", default=None, help="session data directory")
    parser.add_argument("--port", type=int, default=DEFAULT_PORT, help="listen port")
    parser.add_argument(
        "--stub-llm", action="store_true", help="force the offline stub provider"
    )
    parser.add_argument("--stub-seed", type=int, default=0, help="stub determinism seed")
    parser.add_argument("--llm-endpoint", default="", help="chat provider endpoint URL")
    parser.add_argument("--embed-endpoint", default="", help="embedding provider endpoint URL")
    parser.add_argument("--model-reasoning", default="", help="model id for analysis/generation")
    parser.add_argument("--model-chat", default="", help="model id for the mentee persona")
    parser.add_argument("--model-embed", default="", help="model id for embeddings")
    parser.add_argument("--embed-dim", type=int, default=DEFAULT_EMBED_DIM)
    parser.add_argument("--max-inflight-llm", type=int, default=4)
    parser.add_argument("--request-timeout-ms", type=int, default=60_000)


def _config_from_args(args: argparse.Namespace, default_data_dir: str) -> EngineConfig:
    stub_mode = bool(args.stub_llm) or not args.llm_endpoint
    return EngineConfig(
        kb_path=Path(args.kb) if args.kb else packaged_fixture("kb.yaml"),
        catalog_path=Path(args.scenarios) if args.scenarios else packaged_fixture("scenarios.yaml"),
        data_dir=Path(args.data_dir) if args.data_dir else Path(default_data_dir),
        listen_port=args.port,
        llm_endpoint=args.llm_endpoint,
        embed_endpoint=args.embed_endpoint,
        model_reasoning=args.model_reasoning,
        model_chat=args.model_chat,
        model_embed=args.model_embed,
        stub_mode=stub_mode,
        stub_seed=args.stub_seed,
        embed_dim=args.embed_dim,
        max_inflight_llm=args.max_inflight_llm,
        request_timeout_ms=args.request_timeout_ms,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="novobo", description="Teachable mentee-agent engine"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve_parser = sub.add_parser("serve", help="run the HTTP API")
    _add_config_flags(serve_parser)

    kb_parser = sub.add_parser("kb", help="knowledge base utilities")
    kb_sub = kb_parser.add_subparsers(dest="kb_command", required=True)
    validate_parser = kb_sub.add_parser("validate", help="validate a KB document")
    validate_parser.add_argument("path", help="KB document to validate")
    ingest_parser = kb_sub.add_parser(
        "ingest", help="validate candidate exemplars and merge them into a KB"
    )
    ingest_parser.add_argument("exemplars", help="document with candidate exemplars")
    ingest_parser.add_argument("--kb", default=None, help="base KB document")
    ingest_parser.add_argument("--out", default=None, help="write the merged KB here")

    session_parser = sub.add_parser("session", help="session utilities")
    session_sub = session_parser.add_subparsers(dest="session_command", required=True)
    export_parser = session_sub.add_parser("export", help="print a stored session document")
    export_parser.add_argument("id", help="session id")
    export_parser.add_argument("--data-dir", default="./novobo-data")

    demo_parser = sub.add_parser(
        "demo", help="run one scripted mentoring round against the stub"
    )
    _add_config_flags(demo_parser)

    return parser


def _cmd_serve(args: argparse.Namespace) -> int:
    from .app import serve

    config = _config_from_args(args, default_data_dir="./novobo-data")
    try:
        serve(config)
    except EngineError as error:
        print(f"{error.code}: {error}", file=sys.stderr)
        return 1
    return 0


def _cmd_kb_validate(args: argparse.Namespace) -> int:
    try:
        kb = load_knowledge_base(args.path)
    except EngineError as error:
        print(f"{error.code}: {error}", file=sys.stderr)
        return 1
    print(
        f"ok: {len(kb.gesture_types)} gesture types, {len(kb.intentions)} intentions, "
        f"{len(kb.exemplars)} exemplars, {len(kb.citations)} citations"
    )
    return 0


def _load_candidates(path: Path) -> list[dict]:
    doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    if isinstance(doc, dict) and isinstance(doc.get("exemplars"), list):
        return doc["exemplars"]
    if isinstance(doc, list):
        return doc
    raise EngineError("exemplar document must be a list or carry an 'exemplars' list")


def _cmd_kb_ingest(args: argparse.Namespace) -> int:
    kb_path = Path(args.kb) if args.kb else packaged_fixture("kb.yaml")
    try:
        kb = load_knowledge_base(kb_path)
        candidates = _load_candidates(Path(args.exemplars))
    except (EngineError, OSError, yaml.YAMLError) as error:
        print(f"ingest failed: {error}", file=sys.stderr)
        return 1

    taken_ids = {exemplar.id for exemplar in kb.exemplars}
    problems: list[str] = []
    for i, raw in enumerate(candidates):
        if not isinstance(raw, dict):
            problems.append(f"candidate[{i}]: not a mapping")
            continue
        candidate = GestureExemplar(
            id=raw.get("id") if isinstance(raw.get("id"), int) else -1,
            scenario_text=str(raw.get("scenario_text") or ""),
            gesture_description=str(raw.get("gesture_description") or ""),
            gesture_type=str(raw.get("gesture_type") or ""),
            intention=str(raw.get("intention") or ""),
            annotator_note=str(raw.get("annotator_note") or ""),
        )
        report = validate_exemplar(kb, candidate)
        for violation in report.violations:
            problems.append(f"candidate[{i}]: {violation.code}: {violation.detail}")
        if candidate.id in taken_ids:
            problems.append(f"candidate[{i}]: DuplicateId: id {candidate.id} already in KB")
        taken_ids.add(candidate.id)
    if problems:
        for problem in problems:
            print(problem, file=sys.stderr)
        return 1

    merged = yaml.safe_load(kb_path.read_text(encoding="utf-8"))
    merged.setdefault("exemplars", [])
    merged["exemplars"].extend(candidates)
    output = yaml.safe_dump(merged, sort_keys=False, allow_unicode=True)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
        print(f"merged {len(candidates)} exemplars into {args.out}")
    else:
        print(output)
    return 0


def _cmd_session_export(args: argparse.Namespace) -> int:
    try:
        session = SessionStore(args.data_dir).load(args.id)
    except EngineError as error:
        print(f"{error.code}: {error}", file=sys.stderr)
        return 1
    print(json.dumps(export_session(session), indent=2))
    return 0


def _cmd_demo(args: argparse.Namespace) -> int:
    from .demo import run_demo

    # demo always runs offline; session files go to a scratch dir by default
    default_dir = tempfile.mkdtemp(prefix="novobo-demo-")
    config = _config_from_args(args, default_data_dir=default_dir)
    config.stub_mode = True
    try:
        return run_demo(config)
    except EngineError as error:
        print(f"{error.code}: {error}", file=sys.stderr)
        return 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "kb":
        if args.kb_command == "validate":
            return _cmd_kb_validate(args)
        return _cmd_kb_ingest(args)
    if args.command == "session":
        return _cmd_session_export(args)
    return _cmd_demo(args)


if __name__ == "__main__":
    sys.exit(main())
