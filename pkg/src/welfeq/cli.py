"""Command-line entry point.

Subcommands cover the package's main workflows: listing the game
catalog, solving welfare equilibria, classifying games as coincidental
or not, running learner matches and phase portraits, running the
welfare-function bandit, and emitting full solver reports. All results
go to ``--out`` (or stdout) as schema-versioned JSON, or CSV for single
trajectories.

Exit codes: 0 on success, 2 on any configuration error (unknown game,
rule, or welfare tag, or invalid numeric settings).
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import build_game, catalog
from .equilibria import (
    WELFARE_TAGS,
    GridSolver,
    StrategyGrid,
    WelfareFunction,
    is_coincidental,
    we_profile_report,
)
from .harness import (
    ExperimentConfig,
    phase_portrait,
    run_trials,
    trajectories_to_json,
    trajectory_to_csv,
    trajectory_to_json,
)
from .learners import RULES, LearnerConfig
from .welfuse import WelfuseConfig, welfuse_run

__all__ = ["main"]


def _add_common(p: argparse.ArgumentParser, *, game=True):
    if game:
        p.add_argument("--game", required=True, help="game name from the catalog")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=float, default=0.96,
                   help="discount factor for the iterated games")


def _add_learner(p: argparse.ArgumentParser):
    p.add_argument("--rule", default="nl", help=f"learner rule, one of {RULES}")
    p.add_argument("--rule-y", default=None,
                   help="rule for the second player (default: same as --rule)")
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--n", type=int, default=1, help="opponent sample count")
    p.add_argument("--m", type=int, default=1, help="own sample count")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--trials", type=int, default=1)


def _learner_cfg(args, rule: str) -> LearnerConfig:
    return LearnerConfig(rule=rule, eta=args.eta, alpha=args.alpha,
                         sigma=args.sigma, n_samples=args.n, m_samples=args.m)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w") as f:
            f.write(text)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="welfeq")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-games", help="print all catalog game names")

    p = sub.add_parser("solve-we", help="solve both players' welfare equilibria")
    _add_common(p)
    p.add_argument("--welfare", default="greedy", help=f"one of {WELFARE_TAGS}")
    p.add_argument("--grid-points", type=int, default=1001)

    p = sub.add_parser("classify", help="report whether a game is coincidental")
    _add_common(p)
    p.add_argument("--grid-points", type=int, default=1001)

    p = sub.add_parser("run-match", help="run learner-vs-learner trials")
    _add_common(p)
    _add_learner(p)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("phase-portrait", help="run one match per init-grid point")
    _add_common(p)
    _add_learner(p)
    p.add_argument("--grid-points", type=int, default=20,
                   help="init-grid points per axis")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("welfuse", help="run the welfare-function bandit")
    _add_common(p)
    p.add_argument("--welfare", default="greedy,egalitarian,fairness",
                   help="comma-separated welfare tags")
    p.add_argument("--episodes", type=int, default=3)
    p.add_argument("--batch", type=int, default=100)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=25.0)
    p.add_argument("--rule", default="elola", help="inner learner rule")
    p.add_argument("--opponent", default="nl",
                   help="opponent rule name, or 'self' for self-play")

    p = sub.add_parser("report", help="emit a full solver report for a game")
    _add_common(p)
    p.add_argument("--welfare", default="greedy", help="welfare tag for both seats")
    p.add_argument("--grid-points", type=int, default=1001)

    return parser


def _cmd_list_games(args) -> int:
    for name in catalog():
        print(name)
    return 0


def _cmd_solve_we(args) -> int:
    game = build_game(args.game, gamma=args.gamma)
    grid = StrategyGrid.for_game(game, n=args.grid_points)
    solver = GridSolver(game, grid)
    wf = WelfareFunction.for_game(args.welfare, game, solver=solver)
    ix = solver.we_index("x", wf)
    iy = solver.we_index("y", wf)
    rx, ry = solver.profile_rewards(ix, iy)
    doc = {
        "schema": 1,
        "kind": "we_solution",
        "game": game.name,
        "welfare": args.welfare,
        "x": float(grid.x[ix]),
        "y": float(grid.y[iy]),
        "reward_x": rx,
        "reward_y": ry,
        "welfare_value_x": float(solver.welfare_curve("x", wf)[ix]),
        "welfare_value_y": float(solver.welfare_curve("y", wf)[iy]),
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _cmd_classify(args) -> int:
    game = build_game(args.game, gamma=args.gamma)
    grid = StrategyGrid.for_game(game, n=args.grid_points)
    doc = {
        "schema": 1,
        "kind": "classification",
        "game": game.name,
        "coincidental": bool(is_coincidental(game, grid)),
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _match_config(args) -> ExperimentConfig:
    rule_y = args.rule_y or args.rule
    return ExperimentConfig(
        game=args.game,
        learner_x=_learner_cfg(args, args.rule),
        learner_y=_learner_cfg(args, rule_y),
        steps=args.steps, trials=args.trials, seed=args.seed, gamma=args.gamma)


def _cmd_run_match(args) -> int:
    cfg = _match_config(args)
    recs = run_trials(cfg, workers=args.workers)
    if args.format == "csv":
        if len(recs) != 1:
            raise ValueError("csv output requires --trials 1")
        _emit(trajectory_to_csv(recs[0]), args.out)
    elif len(recs) == 1:
        _emit(trajectory_to_json(recs[0]), args.out)
    else:
        _emit(trajectories_to_json(recs), args.out)
    return 0


def _cmd_phase_portrait(args) -> int:
    if args.format == "csv":
        raise ValueError("phase portraits serialize as JSON only")
    cfg = _match_config(args)
    recs = phase_portrait(cfg, grid_x=args.grid_points, grid_y=args.grid_points,
                          workers=args.workers)
    _emit(trajectories_to_json(recs), args.out)
    return 0


def _cmd_welfuse(args) -> int:
    if args.format == "csv":
        raise ValueError("welfuse histories serialize as JSON only")
    game = build_game(args.game, gamma=args.gamma)
    tags = tuple(t.strip() for t in args.welfare.split(",") if t.strip())
    for t in tags:
        if t not in WELFARE_TAGS:
            raise ValueError(f"unknown welfare tag {t!r}, expected one of {WELFARE_TAGS}")
    inner = LearnerConfig(rule=args.rule, eta=args.eta, alpha=args.alpha)
    cfg = WelfuseConfig(welfare_set=tags, episodes=args.episodes,
                        batch=args.batch, steps=args.steps, inner=inner,
                        seed=args.seed)
    if args.opponent == "self":
        hx, hy = welfuse_run(cfg, game, "self")
        doc = {"schema": 1, "kind": "welfuse_history_pair",
               "x": hx.to_dict(), "y": hy.to_dict()}
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        hist = welfuse_run(cfg, game, LearnerConfig(rule=args.opponent, eta=args.eta))
        _emit(json.dumps(hist.to_dict(), indent=2), args.out)
    return 0


def _cmd_report(args) -> int:
    game = build_game(args.game, gamma=args.gamma)
    grid = StrategyGrid.for_game(game, n=args.grid_points)
    solver = GridSolver(game, grid)
    wf_x = WelfareFunction.for_game(args.welfare, game, solver=solver)
    wf_y = WelfareFunction.for_game(args.welfare, game, solver=solver)
    report = we_profile_report(game, wf_x, wf_y, solver=solver)
    _emit(report.to_json(), args.out)
    return 0


_COMMANDS = {
    "list-games": _cmd_list_games,
    "solve-we": _cmd_solve_we,
    "classify": _cmd_classify,
    "run-match": _cmd_run_match,
    "phase-portrait": _cmd_phase_portrait,
    "welfuse": _cmd_welfuse,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad flags, which matches the config-error
        # contract; re-raise as a return code so main() stays callable.
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
