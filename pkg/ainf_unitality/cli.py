"""
Command line entry point

Every command reads a category file (see category_file), runs checks or a
construction, and prints a JSON report. Exit codes: 0 when every check
passes, 1 on a failed check or a failed construction, 2 on bad input.
"""

import json
import logging
import sys
import time
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Tuple

import click

from . import config
from .ainfty import check_ainfty, check_functor
from .category_file import CategoryFile, category_document, emit_category, parse_category
from .constructions import (units_from_homotopy_unital, units_from_weak_unit, validate_dg_model,
                            weak_unit_from_unital)
from .double_coderivation import (B1, check_double_coderivation, compare_double, nu_coderivation,
                                  xi_coderivation, verify_xin_identities)
from .errors import AInfError, ConfigError, InputError
from .exact_linalg import Field, parse_field
from .fixtures import FIXTURE_KINDS, emit_fixture, random_double_coderivation
from .homotopy_unital import canonical_hu, homotopy_unital_from_unital, theorem_reports
from .reports import CheckRun, Report, file_digest, run_checks
from .su_correspondence import build_E, check_E, check_family, functor_to_family, slice_reports, zeta_bijection_report
from .unitality import (check_unit_data, envelope_su, is_strictly_unital, search_units,
                        strict_unit_report, su_projection, unit_homotopy_reports, units_cohomologous)

logger = logging.getLogger(__name__)

Checks = Dict[str, Callable[[], Any]]


class Options:
    """Flags shared by the file commands"""

    def __init__(self, truncation: Optional[int], field: Optional[str], output: Optional[str],
                 seed: Optional[int], workers: Optional[int]):
        if truncation is not None and truncation < 1:
            raise click.BadParameter("must be positive", param_hint="--truncation")
        self.settings = click.get_current_context().find_object(config.Settings) or config.load_settings()
        self.truncation = truncation
        self.field = field
        self.output = output
        self.seed = self.settings.seed if seed is None else seed
        self.workers = self.settings.workers if workers is None else workers


def common_options(fn):
    fn = click.option('--workers', type=int, default=None, help='Threads for independent checks')(fn)
    fn = click.option('--seed', type=int, default=None, help='Seed for random fixtures and samples')(fn)
    fn = click.option('-o', '--output', type=click.Path(dir_okay=False), default=None,
                      help='Write the report here instead of stdout')(fn)
    fn = click.option('--field', default=None, help='"rational" or "prime:p"; a file must be over this field')(fn)
    fn = click.option('-n', '--truncation', type=int, default=None, help='Arity truncation N')(fn)
    return fn


def _write(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(text + "\n")
    else:
        click.echo(text)


def _fail(error: Exception, code: int) -> None:
    click.echo(json.dumps({"error": str(error), "success": False}))
    sys.exit(code)


def _load(path: str, opts: Options) -> CategoryFile:
    with open(path, 'r', encoding='utf-8') as f:
        cf = parse_category(f.read(), opts.truncation)
    if opts.field is not None and parse_field(opts.field) != cf.field:
        raise InputError(f"{path} is over {cf.field.name}, not {opts.field}")
    logger.info(f"loaded {path}: {len(cf.category.objects)} objects, N = {cf.truncation}")
    return cf


def _execute(command: str, opts: Options, paths: List[str],
             build: Callable[[], Tuple[Any, Checks, Dict[str, Any]]]) -> None:
    """
    Run build() -> (category file, checks, facts), then the checks, and exit

    The category file only supplies the field and truncation of the report.
    """
    start = time.perf_counter()
    try:
        cf, checks, facts = build()
        results = run_checks(checks, opts.workers)
    except InputError as e:
        logger.error(f"{command}: {e}")
        _fail(e, 2)
    except AInfError as e:
        logger.error(f"{command} failed: {e}")
        _fail(e, 1)
    report = Report(command, cf.truncation, cf.field.name,
                    inputs={p: file_digest(p) for p in paths}, checks=results, facts=facts,
                    timing=round(time.perf_counter() - start, 3))
    _write(report.to_json(), opts.output)
    for check in results:
        if not check.passed:
            logger.warning(f"{check.name} failed at {check.witness.equation}")
    sys.exit(0 if report.success else 1)


def _facts(cf: CategoryFile) -> Dict[str, Any]:
    A = cf.category
    facts: Dict[str, Any] = {
        "objects": len(A.objects),
        "basis": len(A.quiver.gens()),
    }
    if cf.units is not None:
        facts["strictly_unital"] = is_strictly_unital(A, cf.units)
    return facts


@click.group()
@click.option('-v', '--verbose', is_flag=True, help='Debug logging')
@click.option('-q', '--quiet', is_flag=True, help='Warnings and errors only')
@click.pass_context
def main(ctx: click.Context, verbose: bool, quiet: bool):
    """Verify finite A-infinity categories and convert between notions of unitality."""
    try:
        ctx.obj = config.load_settings()
    except ConfigError as e:
        _fail(e, 2)
    level = logging.DEBUG if verbose else logging.WARNING if quiet else ctx.obj.log_level
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s')


@main.command()
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--strict', is_flag=True, help='Also require the units to be strict')
@common_options
def check(path, strict, **kwargs):
    """A-infinity equations, units and every block of the file."""
    opts = Options(**kwargs)

    def build():
        cf = _load(path, opts)
        checks: Checks = {"ainfty": partial(check_ainfty, cf.category)}
        if cf.units is not None:
            checks["units"] = partial(unit_homotopy_reports, cf.category, cf.units)
        if strict:
            units = cf.require("units", "check --strict")
            checks["strict-units"] = partial(strict_unit_report, cf.category, units)
        for name, F in cf.functors.items():
            checks[f"functor:{name}"] = partial(check_functor, F, f"functor[{name}]")
        for name, r in cf.double_coderivations.items():
            checks[f"double:{name}"] = partial(check_double_coderivation, r)
        if cf.dg_model is not None:
            units = cf.require("units", "check")
            checks["dg-model"] = partial(validate_dg_model, cf.dg_model, units)
        return cf, checks, _facts(cf)

    _execute("check", opts, [path], build)


@main.command('check-functor')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@common_options
def check_functor_command(path, **kwargs):
    """Functor equations for every functor block."""
    opts = Options(**kwargs)

    def build():
        cf = _load(path, opts)
        functors = cf.require("functors", "check-functor")
        checks: Checks = {name: partial(check_functor, F, f"functor[{name}]") for name, F in functors.items()}
        facts = {f"{name}_strict": F.is_strict() for name, F in functors.items()}
        return cf, checks, facts

    _execute("check-functor", opts, [path], build)


@main.command()
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--emit', type=click.Path(dir_okay=False), default=None, help='Write the envelope as a category file')
@common_options
def envelope(path, emit, **kwargs):
    """Adjoin strict units and check the result."""
    opts = Options(**kwargs)

    def build():
        cf = _load(path, opts)
        env = envelope_su(cf.category)
        checks: Checks = {
            "envelope": partial(check_ainfty, env.category),
            "envelope-units": partial(strict_unit_report, env.category, env.unit_vectors()),
            "embedding": partial(check_functor, env.embedding),
        }
        if cf.units is not None and is_strictly_unital(cf.category, cf.units):
            _, pi = su_projection(cf.category, cf.units, env)
            checks["projection"] = partial(check_functor, pi)
        if emit:
            _write(emit_category(CategoryFile(env.category, env.unit_vectors())), emit)
        return cf, checks, {"basis": len(env.category.quiver.gens())}

    _execute("envelope", opts, [path], build)


@main.command()
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@common_options
def unitality(path, **kwargs):
    """
    Unit homotopies for the file's units, or a search when there are none.

    Strictly unital inputs also get their units re-extracted through the
    weak unit and the canonical homotopy unital structure.
    """
    opts = Options(**kwargs)

    def build():
        cf = _load(path, opts)
        A = cf.category
        facts = _facts(cf)
        if cf.units is None:
            data = search_units(A)
            facts["unital"] = data is not None
            checks: Checks = {}
            if data is not None:
                checks["units"] = partial(check_unit_data, A, data)
            else:
                run = CheckRun(f"unit-search[{A.name}]", A.truncation, A.field)
                run.fail("unit-search", "no unit candidates with homotopies found")
                checks["units"] = run.report
            return cf, checks, facts

        checks = {"units": partial(unit_homotopy_reports, cf.category, cf.units)}
        if facts["strictly_unital"]:
            def weak():
                env, pi = su_projection(A, cf.units)
                return units_from_weak_unit(pi, env)[1]

            def fukaya():
                return units_from_homotopy_unital(canonical_hu(A, cf.units))[1]

            checks["weak-unit-extraction"] = weak
            checks["homotopy-unital-extraction"] = fukaya
        return cf, checks, facts

    _execute("unitality", opts, [path], build)


@main.command('weak-unit')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@common_options
def weak_unit(path, **kwargs):
    """Build a weak unit from the units and DG model of the file."""
    opts = Options(**kwargs)

    def build():
        cf = _load(path, opts)
        model = cf.require("dg_model", "weak-unit")
        units = cf.require("units", "weak-unit")
        validation = validate_dg_model(model, units)
        if not all(r.passed for r in validation):
            return cf, {"dg-model": lambda: validation}, {"constructed": False}
        U, env, reports = weak_unit_from_unital(cf.category, units, model)
        family = functor_to_family(U, env)
        checks: Checks = {
            "dg-model": lambda: validation,
            "construction": lambda: reports,
            "family": partial(check_family, family),
            "slice": partial(slice_reports, family),
        }
        return cf, checks, {"constructed": True}

    _execute("weak-unit", opts, [path], build)


@main.command('homotopy-unital')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--emit', type=click.Path(dir_okay=False), default=None, help='Write C+ as a category file')
@common_options
def homotopy_unital(path, emit, **kwargs):
    """Build a homotopy unital structure from the units and DG model of the file."""
    opts = Options(**kwargs)

    def build():
        cf = _load(path, opts)
        model = cf.require("dg_model", "homotopy-unital")
        units = cf.require("units", "homotopy-unital")
        validation = validate_dg_model(model, units)
        if not all(r.passed for r in validation):
            return cf, {"dg-model": lambda: validation}, {"constructed": False}
        H, phi_plus = homotopy_unital_from_unital(cf.category, units, model)
        if emit:
            _write(json.dumps(category_document(H.plus, H.su_vectors()), indent=2, ensure_ascii=False), emit)

        def extraction():
            data, reports = units_from_homotopy_unital(H)
            run = CheckRun(f"units-cohomologous[{cf.category.name}]", cf.truncation, cf.field)
            if not units_cohomologous(cf.category, data.units, units):
                run.fail("units-cohomologous", "extracted units differ from the input units in cohomology")
            return reports + [run.report()]

        checks: Checks = {
            "dg-model": lambda: validation,
            "theorem": partial(theorem_reports, H, phi_plus, model),
            "extraction": extraction,
        }
        return cf, checks, {"constructed": True, "plus_basis": len(H.plus.quiver.gens())}

    _execute("homotopy-unital", opts, [path], build)


@main.command('double-coder')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@common_options
def double_coder(path, **kwargs):
    """Coderivation law and B1·B1 = 0 for every double coderivation block."""
    opts = Options(**kwargs)

    def build():
        cf = _load(path, opts)
        doubles = cf.require("double_coderivations", "double-coder")
        checks: Checks = {}
        for name, r in doubles.items():
            checks[f"{name}:law"] = partial(check_double_coderivation, r)
            checks[f"{name}:square"] = partial(compare_double, B1(B1(r)), None, f"B1-square[{name}]")
        return cf, checks, {"double_coderivations": len(doubles)}

    _execute("double-coder", opts, [path], build)


def lemma_checks(cf: CategoryFile, seed: int, samples: int = 3) -> Checks:
    """ν, ξ and ζ identities on one category"""
    A = cf.category
    nu = nu_coderivation(A)
    checks: Checks = {
        "nu-law": partial(check_double_coderivation, nu),
        "nu-B1": partial(compare_double, B1(nu), None, f"nuB1-zero[{A.name}]"),
    }
    env = envelope_su(A)
    checks["zeta"] = partial(zeta_bijection_report, env, min(A.truncation, 3))
    checks["E"] = partial(check_E, build_E(A), env, A.truncation)
    total = min(3, A.truncation - 1)
    for k in range(samples):
        r = random_double_coderivation(A, -1, seed + k, total)
        checks[f"B1-square-{k}"] = partial(compare_double, B1(B1(r)), None, f"B1-square[{r.name}]")
    if cf.units is not None and is_strictly_unital(A, cf.units):
        xi = xi_coderivation(A, cf.units)
        checks["xi-law"] = partial(check_double_coderivation, xi)
        checks["xi-B1"] = partial(compare_double, B1(xi), nu, f"xiB1-nu[{A.name}]")
        checks["xi-identities"] = partial(verify_xin_identities, A, cf.units, 3)
    return checks


@main.command('verify-lemmas')
@click.argument('path', required=False, type=click.Path(exists=True, dir_okay=False))
@common_options
def verify_lemmas(path, **kwargs):
    """
    Identities of ν, ξ, B1 and the correspondence ζ

    Without a file, runs on the dg-random fixture for --seed.
    """
    opts = Options(**kwargs)

    def build():
        if path:
            cf = _load(path, opts)
        else:
            field_ = parse_field(opts.field or opts.settings.field)
            cf = emit_fixture("dg-random", opts.seed, field_, opts.truncation or opts.settings.truncation)
        return cf, lemma_checks(cf, opts.seed), _facts(cf)

    _execute("verify-lemmas", opts, [path] if path else [], build)


@main.command()
@click.argument('kind', type=click.Choice(FIXTURE_KINDS))
@common_options
def fixtures(kind, **kwargs):
    """Write a seeded example category file."""
    opts = Options(**kwargs)
    try:
        field_: Field = parse_field(opts.field or opts.settings.field)
        cf = emit_fixture(kind, opts.seed, field_, opts.truncation or opts.settings.truncation)
    except InputError as e:
        _fail(e, 2)
    except AInfError as e:
        _fail(e, 1)
    _write(emit_category(cf), opts.output)
    logger.info(f"wrote {kind} fixture with seed {opts.seed}")


if __name__ == '__main__':
    main()
