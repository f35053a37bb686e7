"""Command-line interface: learn, query, explain, validate, serve.

The CLI is a thin layer over the core package; the interactive explain REPL
drives the same dialogue engine as the HTTP service, so any transcript
achievable over HTTP is achievable here with identical response texts.

Exit codes: 0 success, 1 IO/parse errors, 2 incomplete or inconsistent
learning result, 3 query not entailed.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import dialogue as dlg
from .config import ConfigError, ServiceConfig, load_config
from .engine import SolveLimits, solve
from .explain import NotEntailedError, NotGroundError, tree_to_dot, tree_to_json
from .learner import InducedModel, learn, load_modes, validate_model
from .media import MediaError
from .parser import parse_atom, parse_examples, parse_program
from .terms import KbError, render


class _Context:
    def __init__(self, config_path: Path | None):
        self.config_path = config_path
        self._config: ServiceConfig | None = None

    @property
    def config(self) -> ServiceConfig:
        if self._config is None:
            self._config = load_config(self.config_path)
        return self._config


@click.group(context_settings={"auto_envvar_prefix": "EXPLIKIT"})
@click.option(
    "--config",
    "config_path",
    type=click.Path(path_type=Path),
    default=None,
    help="Service configuration file (defaults to the bundled dataset).",
)
@click.pass_context
def main(ctx: click.Context, config_path: Path | None) -> None:
    """Interpretable rule learning with explanatory dialogues."""
    ctx.obj = _Context(config_path)


def _fail(message: str, code: int = 1) -> "click.exceptions.Exit":
    click.echo(f"error: {message}", err=True)
    return click.exceptions.Exit(code)


def _load_problem(config: ServiceConfig):
    kb = parse_program(config.kb_path.read_text(encoding="utf-8"))
    examples = parse_examples(config.examples_path.read_text(encoding="utf-8"))
    modes, limits = load_modes(config.modes_path.read_text(encoding="utf-8"))
    return kb, examples, modes, limits


@main.command("learn")
@click.option(
    "--out",
    type=click.Path(path_type=Path),
    default=Path("model.pl"),
    show_default=True,
    help="Where to write the learned model.",
)
@click.pass_obj
def learn_cmd(ctx: _Context, out: Path) -> None:
    """Induce a model from the configured theory and examples."""
    try:
        kb, examples, modes, limits = _load_problem(ctx.config)
    except (OSError, KbError, ConfigError, json.JSONDecodeError) as exc:
        raise _fail(str(exc))
    result = learn(kb, examples, modes, limits)
    out.write_text(result.model.render(), encoding="utf-8")
    click.echo(f"wrote {len(result.model)} clause(s) to {out}")
    for clause in result.model.clauses:
        click.echo(f"  {render(clause)}")
    report = validate_model(result.model, kb, examples, limits)
    for line in report.lines():
        click.echo(line)
    if result.uncoverable:
        click.echo("uncoverable positives:", err=True)
        for atom in result.uncoverable:
            click.echo(f"  {atom}", err=True)
        raise click.exceptions.Exit(2)
    if not (report.complete and report.consistent):
        raise click.exceptions.Exit(2)


@main.command("validate")
@click.option(
    "--model",
    "model_path",
    type=click.Path(path_type=Path),
    default=Path("model.pl"),
    show_default=True,
)
@click.pass_obj
def validate_cmd(ctx: _Context, model_path: Path) -> None:
    """Check a model file for completeness and consistency."""
    try:
        kb, examples, modes, limits = _load_problem(ctx.config)
        model_kb = parse_program(model_path.read_text(encoding="utf-8"))
        model = InducedModel.from_kb(model_kb, modes.target)
    except (OSError, KbError, ValueError) as exc:
        raise _fail(str(exc))
    report = validate_model(model, kb, examples, limits)
    for line in report.lines():
        click.echo(line)
    if not (report.complete and report.consistent):
        raise click.exceptions.Exit(2)


def _load_model(ctx: _Context, model_path: Path | None):
    """The model for querying: an explicit file, the configured file, or
    learned on the fly."""
    config = ctx.config
    kb, examples, modes, limits = _load_problem(config)
    path = model_path or config.model_path
    if path is not None and Path(path).exists():
        model = InducedModel.from_kb(
            parse_program(Path(path).read_text(encoding="utf-8")), modes.target
        )
    else:
        model = learn(kb, examples, modes, limits).model
    return kb, model, limits


@main.command("query")
@click.argument("goal")
@click.option("--model", "model_path", type=click.Path(path_type=Path), default=None)
@click.option("--max-solutions", type=int, default=None)
@click.option("--proof-json", is_flag=True, help="Print each proof tree as JSON.")
@click.pass_obj
def query_cmd(
    ctx: _Context, goal: str, model_path: Path | None, max_solutions: int | None, proof_json: bool
) -> None:
    """Run a query atom against the theory plus the model."""
    from .engine import proof_to_json

    try:
        atom = parse_atom(goal)
        kb, model, limits = _load_model(ctx, model_path)
    except (OSError, KbError, ConfigError, ValueError) as exc:
        raise _fail(str(exc))
    program = model.as_kb().merge_before(kb)
    result = solve(atom, program, SolveLimits(depth=limits.depth, max_solutions=max_solutions))
    if not result.solutions:
        click.echo("false.")
        if result.depth_limit_hit:
            click.echo("(depth limit hit; result may be incomplete)", err=True)
        return
    for solution in result.solutions:
        bindings = solution.substitution.resolved()
        if bindings:
            click.echo(", ".join(f"{k} = {v}" for k, v in sorted(bindings.items())))
        else:
            click.echo("true.")
        if proof_json:
            click.echo(json.dumps(proof_to_json(solution.proof), indent=2))


def _print_response(response: dlg.Response) -> None:
    click.echo(response.text)
    for ref in response.images:
        caption = f" ({ref.caption})" if ref.caption else ""
        click.echo(f"[image] {ref.path}{caption}")
    for choice in response.choices:
        click.echo(f"  {choice.index}) {choice.text}")


def _repl(session: dlg.DialogueSession) -> None:
    click.echo("(commands: a number to drill down, 'why', 'back', 'image [constant]',")
    click.echo(" 'what <predicate>', 'classify <atom>', 'quit')")
    while session.state != dlg.ENDED:
        try:
            line = click.prompt("", prompt_suffix="> ", default="", show_default=False)
        except (EOFError, click.exceptions.Abort):
            line = "quit"
        line = line.strip()
        if not line:
            continue
        try:
            request = _parse_repl_command(line)
        except ValueError as exc:
            click.echo(f"? {exc}")
            continue
        try:
            response = session.handle(request)
        except dlg.DialogueError as exc:
            click.echo(f"? {exc}")
            continue
        except (NotGroundError, KbError) as exc:
            click.echo(f"? {exc}")
            continue
        _print_response(response)


def _parse_repl_command(line: str) -> dlg.Request:
    word, _, rest = line.partition(" ")
    rest = rest.strip()
    if word.isdigit():
        return dlg.DrillDown(int(word))
    if word in ("why",):
        return dlg.Why()
    if word in ("back", "b"):
        return dlg.Back()
    if word in ("image", "img"):
        return dlg.ShowImage(rest or None)
    if word in ("what", "what_means"):
        if not rest:
            raise ValueError("usage: what <predicate>")
        return dlg.WhatMeans(rest)
    if word in ("classify", "c"):
        if not rest:
            raise ValueError("usage: classify <atom>")
        return dlg.Classify(parse_atom(rest))
    if word in ("quit", "q", "exit"):
        return dlg.Quit()
    raise ValueError(f"unknown command {word!r}")


@main.command("explain")
@click.argument("goal")
@click.option("--model", "model_path", type=click.Path(path_type=Path), default=None)
@click.option("--tree-json", is_flag=True, help="Print the explanatory tree as JSON.")
@click.option("--dot", is_flag=True, help="Print the explanatory tree as GraphViz DOT.")
@click.option("--interactive", is_flag=True, help="Explore the explanation in a dialogue.")
@click.pass_obj
def explain_cmd(
    ctx: _Context,
    goal: str,
    model_path: Path | None,
    tree_json: bool,
    dot: bool,
    interactive: bool,
) -> None:
    """Explain why the model classifies GOAL as positive."""
    from .explain import build_tree
    from .media import load_manifest
    from .verbalize import load_templates

    config = ctx.config
    try:
        atom = parse_atom(goal)
        kb, model, limits = _load_model(ctx, model_path)
        templates = load_templates(config.templates_path.read_text(encoding="utf-8"))
        strings = json.loads(config.strings_path.read_text(encoding="utf-8"))
        registry = load_manifest(config.media_manifest_path, config.media_root)
    except (OSError, KbError, ConfigError, MediaError, ValueError) as exc:
        raise _fail(str(exc))

    session = dlg.open_session(model, kb, registry, templates, strings, limits)
    if interactive:
        click.echo(session.transcript[0][1]["text"])
    try:
        response = session.handle(dlg.Classify(atom))
    except NotGroundError as exc:
        raise _fail(str(exc))
    if response.classification == "negative":
        click.echo(response.text)
        raise click.exceptions.Exit(3)
    _print_response(response)
    if tree_json or dot:
        tree = build_tree(atom, model, kb, registry, limits)
        if tree_json:
            click.echo(json.dumps(tree_to_json(tree), indent=2))
        if dot:
            click.echo(tree_to_dot(tree))
    if interactive:
        _repl(session)


@main.command("serve")
@click.option("--host", default=None, help="Override the configured listen host.")
@click.option("--port", type=int, default=None, help="Override the configured port.")
@click.pass_obj
def serve_cmd(ctx: _Context, host: str | None, port: int | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app, load_state

    try:
        state = load_state(ctx.config)
    except (OSError, KbError, ConfigError, MediaError, ValueError) as exc:
        raise _fail(str(exc))
    app = create_app(state=state)
    uvicorn.run(
        app,
        host=host or ctx.config.host,
        port=port if port is not None else ctx.config.port,
        log_level="info",
    )


if __name__ == "__main__":
    main()
