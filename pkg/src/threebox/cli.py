"""Command-line front end.

Subcommands:
    quantum     run a pre/post-selected scenario, exactly or by Monte Carlo
    classical   run one of the four look-and-disturb games
    compare     print the measurement-disturbance discriminator table
    weak        sweep the Gaussian-meter readout over coupling strengths
    bob         play rounds as Bob against the post-selecting Alice

Every run emits one output document with the fixed keys ``scenario``,
``parameters``, ``exact``, and ``monte_carlo`` (null when no sampling was
requested). Exact classical probabilities serialize as ``p/q`` strings in
lowest terms; quantum ones as decimals. Exit codes: 0 success, 2 usage
error, 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from .games import SimplifiedVariant
from .harness import (
    DiscriminatorRow,
    GameModel,
    RunStatistics,
    discriminator_table,
    enumerate_exact,
    kirkpatrick_game,
    leifer_spekkens_game,
    monte_carlo,
    move_game,
    quantum_game,
    simplified_game,
    substream_table,
)
from .sampling import SequenceSource
from .scenarios import BobStrategy, Scenario, alice_bob_round, build
from .twostate import meter_mean, weak_value

_DEFAULT_RUNS = 100_000


def _fresh_seed() -> int:
    return int.from_bytes(os.urandom(4), "big")


def _serialize_events(events: dict[str, Fraction], quantum: bool) -> dict[str, float | str]:
    if quantum:
        return {key: float(value) for key, value in events.items()}
    return {key: str(value) for key, value in events.items()}


def _mc_payload(stats: RunStatistics) -> dict:
    return {
        "runs": stats.runs,
        "seed": stats.seed,
        "counts": dict(stats.counts),
        "frequencies": dict(stats.frequencies),
        "ci95": {key: list(interval) for key, interval in stats.ci95.items()},
    }


def _document(scenario: str, parameters: dict, exact: dict, mc: dict | None) -> dict:
    return {"scenario": scenario, "parameters": parameters, "exact": exact, "monte_carlo": mc}


def _render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _render_csv(doc: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["event", "exact", "frequency", "ci_low", "ci_high"])
    mc = doc["monte_carlo"] or {}
    frequencies = mc.get("frequencies", {})
    ci95 = mc.get("ci95", {})
    events = list(doc["exact"])
    events += [key for key in frequencies if key not in doc["exact"]]
    for event in events:
        exact = doc["exact"].get(event, "")
        if event in frequencies:
            low, high = ci95[event]
            writer.writerow([event, exact, repr(frequencies[event]), repr(low), repr(high)])
        else:
            writer.writerow([event, exact, "", "", ""])
    return buffer.getvalue()


def _format_value(value: float | str) -> str:
    if isinstance(value, str):
        return value
    return f"{value:.9g}"


def _render_text(doc: dict) -> str:
    lines = [f"scenario: {doc['scenario']}"]
    for key, value in doc["parameters"].items():
        lines.append(f"{key}: {value}")
    lines.append("exact:")
    width = max((len(k) for k in doc["exact"]), default=0)
    for event, value in doc["exact"].items():
        lines.append(f"  {event:<{width}}  {_format_value(value)}")
    mc = doc["monte_carlo"]
    if mc:
        lines.append(f"monte carlo ({mc['runs']} runs, seed {mc['seed']}):")
        width = max(len(k) for k in mc["frequencies"])
        for event, frequency in mc["frequencies"].items():
            low, high = mc["ci95"][event]
            count = mc["counts"].get(event)
            count_part = f"count {count:>8}  " if count is not None else " " * 17
            lines.append(
                f"  {event:<{width}}  {count_part}freq {frequency:<12.6g} "
                f"ci95 [{low:.6f}, {high:.6f}]"
            )
    return "\n".join(lines) + "\n"


def _emit(doc: dict, args: argparse.Namespace, text: str | None = None) -> int:
    if args.format == "json":
        rendered = _render_json(doc)
    elif args.format == "csv":
        rendered = _render_csv(doc)
    else:
        rendered = text if text is not None else _render_text(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "csv", "text"], default="text")
    parser.add_argument("--out", metavar="PATH", help="write the output to a file")


def _add_mode_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=["exact", "mc"], default="exact")
    parser.add_argument("--runs", type=int, default=_DEFAULT_RUNS, metavar="N")
    parser.add_argument("--seed", type=int, default=None, metavar="N")


def _mode_parameters(args: argparse.Namespace) -> tuple[dict, int | None]:
    """Common mode/runs/seed handling; generates and reports a seed for
    Monte Carlo runs when none was given."""
    parameters: dict = {"mode": args.mode}
    if args.mode != "mc":
        return parameters, None
    seed = args.seed if args.seed is not None else _fresh_seed()
    parameters.update(runs=args.runs, seed=seed)
    return parameters, seed


def _run_model(game: GameModel, args: argparse.Namespace, parser: argparse.ArgumentParser):
    parameters, seed = _mode_parameters(args)
    events = enumerate_exact(game)
    mc = None
    if args.mode == "mc":
        if args.runs < 1:
            parser.error("--runs must be at least 1")
        mc = _mc_payload(monte_carlo(game, args.runs, seed))
    return parameters, events, mc


def cmd_quantum(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    scenario = Scenario(args.scenario)
    valid = {"three-box": ("A", "B", "C", "none"), "spin-box": ("up", "down", "none")}
    if args.measure not in valid[args.scenario]:
        parser.error(
            f"--measure {args.measure} is not valid for {args.scenario}; "
            f"choose from {', '.join(valid[args.scenario])}"
        )
    if args.measure == "C" and args.mode == "mc":
        parser.error("--measure C is an exact-only query; use --mode exact")
    measure = None if args.measure == "none" else args.measure
    game = quantum_game(scenario, measure)
    parameters, events, mc = _run_model(game, args, parser)
    parameters = {"measure": args.measure, **parameters}
    exact = _serialize_events(events, quantum=True)
    if scenario is Scenario.THREE_BOX:
        built = build(scenario)
        for label in ("A", "B", "C"):
            value = weak_value(built.tsv, built.projectors[label])
            exact[f"weak_value_{label}"] = value.real
    doc = _document(args.scenario, parameters, exact, mc)
    return _emit(doc, args)


_GAME_SEARCHES = {
    "kirkpatrick": ("S", "D"),
    "simplified": ("S", "D"),
    "leifer-spekkens": ("left", "right"),
    "move-game": ("box1", "box2"),
}


def cmd_classical(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    searches = _GAME_SEARCHES[args.game]
    search = args.search if args.search is not None else searches[0]
    if search not in searches:
        parser.error(
            f"--search {search} is not valid for {args.game}; "
            f"choose from {', '.join(searches)}"
        )
    if args.variant is not None and args.game != "simplified":
        parser.error("--variant only applies to the simplified game")
    if args.game == "kirkpatrick":
        game = kirkpatrick_game(search)
    elif args.game == "simplified":
        variant = SimplifiedVariant(args.variant or "faithful")
        game = simplified_game(search, variant)
    elif args.game == "leifer-spekkens":
        game = leifer_spekkens_game(search)
    else:
        game = move_game(int(search.removeprefix("box")))
    parameters, events, mc = _run_model(game, args, parser)
    parameters = {"game": args.game, "search": search, **parameters}
    if args.game == "simplified":
        parameters["variant"] = (args.variant or "faithful")
    doc = _document(args.game, parameters, _serialize_events(events, quantum=False), mc)
    return _emit(doc, args)


def _fraction_note(value: Fraction) -> str:
    return f"{float(value):.6f} (= {value})"


def _compare_document(rows: Sequence[DiscriminatorRow]) -> dict:
    exact: dict[str, float | str] = {}
    for row in rows:
        cells = {
            "post_no_measurement": row.post_no_measurement,
            "post_with_measurement": row.post_with_measurement,
            "found_given_post": row.found_given_post,
        }
        for metric, value in cells.items():
            key = f"{row.system}/{metric}"
            exact[key] = float(value) if row.quantum else str(value)
    return _document("compare", {}, exact, None)


def _compare_text(rows: Sequence[DiscriminatorRow]) -> str:
    headers = ["system", "P(post | no measurement)", "P(post | measurement)", "P(found | post)"]
    body = []
    for row in rows:
        if row.quantum:
            cells = [
                _fraction_note(row.post_no_measurement),
                _fraction_note(row.post_with_measurement),
                _fraction_note(row.found_given_post),
            ]
        else:
            cells = [
                str(row.post_no_measurement),
                str(row.post_with_measurement),
                str(row.found_given_post),
            ]
        body.append([row.system, *cells])
    widths = [max(len(line[i]) for line in [headers, *body]) for i in range(len(headers))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for line in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip())
    return "\n".join(lines) + "\n"


def cmd_compare(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    rows = discriminator_table()
    return _emit(_compare_document(rows), args, text=_compare_text(rows))


def cmd_weak(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    try:
        couplings = [float(g) for g in args.couplings.split(",") if g]
    except ValueError:
        parser.error(f"--couplings must be a comma-separated float list, got {args.couplings!r}")
    if not couplings or any(g <= 0 for g in couplings) or args.sigma <= 0:
        parser.error("couplings and --sigma must be positive")
    built = build(Scenario.THREE_BOX)
    projector = built.projectors[args.measure]
    value = weak_value(built.tsv, projector).real
    exact: dict[str, float | str] = {"weak_value": value}
    table_lines = [f"weak value of box {args.measure}: {value:g}", ""]
    table_lines.append(f"{'coupling g':>12}  {'meter mean':>14}  {'mean / g':>12}")
    for g in couplings:
        mean = meter_mean(built.tsv, projector, g, args.sigma)
        exact[f"meter_mean[g={g:g}]"] = mean
        exact[f"mean_over_g[g={g:g}]"] = mean / g
        table_lines.append(f"{g:>12g}  {mean:>14.9f}  {mean / g:>12.9f}")
    parameters = {"measure": args.measure, "sigma": args.sigma, "couplings": couplings}
    doc = _document("three-box", parameters, exact, None)
    return _emit(doc, args, text="\n".join(table_lines) + "\n")


def _prompt_choice(round_index: int) -> str | None:
    """Ask which box to open; None signals the input stream ended."""
    while True:
        try:
            raw = input(f"round {round_index}: open box A or B? ").strip().upper()
        except EOFError:
            return None
        if raw in ("A", "B"):
            return raw
        print("please answer A or B")


def cmd_bob(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.rounds < 0:
        parser.error("--rounds must be nonnegative")
    seed = args.seed if args.seed is not None else _fresh_seed()
    print(f"playing {args.rounds} rounds (seed {seed})")
    interactive = sys.stdin.isatty()
    if not interactive:
        print("input is not a terminal; playing a scripted alternating strategy")
    if args.rounds == 0:
        print("no rounds played.")
        return 0
    table = substream_table(seed, args.rounds)
    outcomes = []
    for i in range(args.rounds):
        choice: str | None = None
        if interactive:
            choice = _prompt_choice(i + 1)
            if choice is None:
                interactive = False
                print("(input ended; switching to the scripted strategy)")
        if choice is None:
            choice = "A" if i % 2 == 0 else "B"
        strategy = BobStrategy.OPEN_A if choice == "A" else BobStrategy.OPEN_B
        result = alice_bob_round(strategy, SequenceSource(table[i]))
        outcomes.append((choice, result))
        verdict = "found the particle" if result.bob_found else "found nothing (a win... if it counts)"
        print(f"round {i + 1}: opened {choice} — {verdict}")
    kept = [i for i, (_, r) in enumerate(outcomes) if r.post_selected]
    print()
    print(f"Alice reveals the rounds that count: {[i + 1 for i in kept] or 'none'}")
    print(f"kept {len(kept)} of {args.rounds} rounds ({len(kept) / args.rounds:.1%})")
    if kept:
        losses = sum(1 for i in kept if outcomes[i][1].bob_found)
        print(f"Bob's losses among kept rounds: {losses}/{len(kept)} ({losses / len(kept):.0%})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threebox",
        description="Simulate pre/post-selected systems and their claimed classical analogues.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    quantum = sub.add_parser("quantum", help="run a pre/post-selected scenario")
    quantum.add_argument("--scenario", choices=["three-box", "spin-box"], default="three-box")
    quantum.add_argument(
        "--measure",
        choices=["A", "B", "C", "up", "down", "none"],
        default="A",
        help="which intermediate measurement to make (none skips it)",
    )
    _add_mode_flags(quantum)
    _add_output_flags(quantum)
    quantum.set_defaults(handler=cmd_quantum)

    classical = sub.add_parser("classical", help="run one of the classical games")
    classical.add_argument(
        "--game",
        choices=["kirkpatrick", "simplified", "leifer-spekkens", "move-game"],
        required=True,
    )
    classical.add_argument(
        "--search",
        default=None,
        help="what to look for: S|D (card games), left|right, or box1|box2",
    )
    classical.add_argument(
        "--variant",
        choices=["faithful", "literal"],
        default=None,
        help="negative-branch rule of the simplified game",
    )
    _add_mode_flags(classical)
    _add_output_flags(classical)
    classical.set_defaults(handler=cmd_classical)

    compare = sub.add_parser("compare", help="print the disturbance discriminator table")
    _add_output_flags(compare)
    compare.set_defaults(handler=cmd_compare)

    weak = sub.add_parser("weak", help="Gaussian-meter readout sweep over couplings")
    weak.add_argument("--measure", choices=["A", "B", "C"], default="C")
    weak.add_argument("--sigma", type=float, default=1.0, help="meter position spread")
    weak.add_argument(
        "--couplings",
        default="1,0.5,0.2,0.1,0.05,0.01",
        help="comma-separated coupling strengths to sweep",
    )
    _add_output_flags(weak)
    weak.set_defaults(handler=cmd_weak)

    bob = sub.add_parser("bob", help="play rounds as Bob; Alice post-selects")
    bob.add_argument("--rounds", type=int, default=12)
    bob.add_argument("--seed", type=int, default=None)
    bob.set_defaults(handler=cmd_bob)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except SystemExit:
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
