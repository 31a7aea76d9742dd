"""
Main API of the spinlab system.

The SpinLab facade runs suites, constructions and width experiments and turns
every outcome into a result dictionary with "success", "error" and
"error_type" keys. The CLI maps those dictionaries onto exit codes.
"""

import json
import logging
import os
import random
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from sympy import primerange

# Set up logger
logger = logging.getLogger(__name__)

try:
    # Try relative imports first (for package usage)
    from .config.settings import settings
    from .errors import PreconditionError, SpinLabError, VerificationError
    from .algebra.arith import OIdeal, four_squares, parse_rational
    from .algebra.clifford import QuadForm
    from .algebra.tori import SPLIT, gamma, is_unit_in_order, splitting_type, torus_val
    from .constructions.approx import (
        approx_pair,
        approx_spin_pair,
        approx_unit,
        class_number,
        principal_witness,
    )
    from .constructions.congruence import (
        FiniteGroupSpec,
        check_isometry,
        gcl_width_bfs,
        isometry_mod,
        parse_element,
        sl3_commutator_identity,
    )
    from .verification import run_suite, verify_certificate
except ImportError:
    # Fall back to absolute imports (for direct execution)
    from config.settings import settings
    from errors import PreconditionError, SpinLabError, VerificationError
    from algebra.arith import OIdeal, four_squares, parse_rational
    from algebra.clifford import QuadForm
    from algebra.tori import SPLIT, gamma, is_unit_in_order, splitting_type, torus_val
    from constructions.approx import (
        approx_pair,
        approx_spin_pair,
        approx_unit,
        class_number,
        principal_witness,
    )
    from constructions.congruence import (
        FiniteGroupSpec,
        check_isometry,
        gcl_width_bfs,
        isometry_mod,
        parse_element,
        sl3_commutator_identity,
    )
    from verification import run_suite, verify_certificate


def dumps(data: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_json(path: str, data: Any) -> str:
    """Write JSON atomically through a temporary file in the target directory."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent), prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(dumps(data))
        os.replace(tmp, target)
    except OSError:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.info(f"Wrote {target}")
    return str(target)


def _failure(e: Exception, **extra: Any) -> Dict[str, Any]:
    if isinstance(e, SpinLabError):
        logger.error(f"{e.error_type}: {e}")
        return {"success": False, "error": str(e), "error_type": e.error_type, "details": e.details, **extra}
    logger.error(f"Unexpected error: {e}")
    return {"success": False, "error": str(e), "error_type": "internal", **extra}


class SpinLab:
    """Main class for spinlab functionality."""

    def __init__(self):
        """Initialize the facade with the current settings."""
        self.settings = settings

    # ------------------------------------------------------------------
    # verify
    # ------------------------------------------------------------------

    def verify_suite(self, suite: str, seed: int, dim: Optional[int] = None) -> Dict[str, Any]:
        """Run a randomized identity suite.

        Args:
            suite: Suite name (coroots, steinberg, clifford, tori, arith)
            seed: Random seed
            dim: Dimension, or None for the suite default

        Returns:
            Dict with the SuiteReport under "report"
        """
        try:
            report = run_suite(suite, seed, dim)
            result = {"success": report.passed, "report": report.model_dump()}
            if not report.passed:
                result["error"] = f"identity {report.counterexample['check']} failed"
                result["error_type"] = "verification"
            return result
        except Exception as e:
            return _failure(e, suite=suite)

    def verify_file(self, path: str) -> Dict[str, Any]:
        """Re-check a certificate file through the independent checker."""
        try:
            with open(path, encoding="utf-8") as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            return {"success": False, "error": f"Cannot read {path}: {e}", "error_type": "precondition"}
        try:
            result = verify_certificate(data)
        except Exception as e:
            return _failure(e, file=path)
        outcome = {"success": result.valid, "verification": result.model_dump(), "file": path}
        if not result.valid:
            outcome["error"] = result.failures[0]
            outcome["error_type"] = "verification"
        return outcome

    # ------------------------------------------------------------------
    # approx
    # ------------------------------------------------------------------

    def approx(
        self,
        kind: str,
        targets: Sequence[str],
        ideal: int,
        t: Optional[int] = None,
        dim: Optional[int] = None,
    ) -> Dict[str, Any]:
        """Build and re-verify an approximation certificate.

        Args:
            kind: unit, pair or spinpair
            targets: Target rationals as text
            ideal: Odd generator of the ideal I
            t: Torus parameter for pair approximation (searched when None)
            dim: Dimension for spinpair

        Returns:
            Dict with the certificate under "certificate" and its re-check
        """
        try:
            values = [parse_rational(a) for a in targets]
            expected = 1 if kind == "unit" else 2
            if len(values) != expected:
                raise PreconditionError(f"approx {kind} needs {expected} target(s), got {len(values)}")
            if ideal < 1:
                raise PreconditionError(f"Ideal generator must be positive, got {ideal}")
            I = OIdeal.generated_by(ideal)

            if kind == "unit":
                certificate = approx_unit(values[0], I).model_dump()
            elif kind == "pair":
                certificate = approx_pair(values[0], values[1], I, t=t).model_dump()
            elif kind == "spinpair":
                certificate = approx_spin_pair(values[0], values[1], I, dim=dim).to_dict()
            else:
                raise PreconditionError(f"Unknown approximation kind {kind!r}")

            check = verify_certificate(certificate)
            if not check.valid:
                raise VerificationError(
                    "Certificate failed independent re-verification", {"failures": check.failures}
                )
            return {"success": True, "certificate": certificate, "verification": check.model_dump()}
        except Exception as e:
            return _failure(e, kind=kind)

    # ------------------------------------------------------------------
    # width
    # ------------------------------------------------------------------

    def width(
        self,
        form: str,
        modulus: int,
        element: str = "id",
        cap: Optional[int] = None,
        dim: int = 4,
        seed: int = 0,
    ) -> Dict[str, Any]:
        """Conjugacy width of an element class in Spin_f(Z/m).

        Returns:
            Dict with the WidthReport under "report"; "sampled" is True when the
            group was too large to enumerate
        """
        try:
            quad = QuadForm.named(form, dim)
            spec = FiniteGroupSpec(quad, modulus)
            matrix, lift = parse_element(element, quad, modulus)
            report = gcl_width_bfs(
                spec, lift if lift is not None else matrix, cap=cap, element_label=element, seed=seed
            )
            result = {"success": True, "report": report.to_dict(), "sampled": report.mode == "sampled"}
            if report.mode == "exact" and report.cap_exceeded:
                result["success"] = False
                result["error"] = f"width exceeds cap {report.cap}"
                result["error_type"] = "cap_exceeded"
            return result
        except Exception as e:
            return _failure(e, form=form, modulus=modulus)

    # ------------------------------------------------------------------
    # report
    # ------------------------------------------------------------------

    def pinned_report(self, seed: int = 0) -> Dict[str, Any]:
        """The fixed numbers the constructions rely on, each re-derived."""
        try:
            rng = random.Random(seed)
            g = gamma()
            split_primes = [int(p) for p in primerange(3, 500) if splitting_type(7, int(p)) == SPLIT]
            principal = all(principal_witness(7, p) is not None for p in split_primes)

            sl3_samples: List[bool] = []
            for _ in range(1000):
                m = 2 * rng.randint(0, 500) + 1
                sl3_samples.append(sl3_commutator_identity(rng.randint(-99, 99), rng.randint(-99, 99), m))

            isometries = {}
            for p in (3, 5, 7, 11):
                for k in range(1, 7):
                    matrix = isometry_mod(p, k, 20)
                    isometries[f"{p}^{k}"] = check_isometry(
                        matrix, QuadForm.f_a(20), QuadForm.f_s(20), p**k
                    )

            report = {
                "gamma": {
                    **g.to_dict(),
                    "unit": is_unit_in_order(g) and is_unit_in_order(g.inverse()),
                    "inverse_is_conjugate": (g * g.inverse()).is_identity(),
                    "torus_val_at_3": torus_val(g, 3),
                },
                "class_number": {"-7": class_number(-7), "-23": class_number(-23)},
                "principal_witnesses_t7_below_500": principal,
                "sl3_commutator_identity": {"samples": len(sl3_samples), "holds": all(sl3_samples)},
                "isometry_mod": isometries,
                "four_squares_7": list(four_squares(7)),
            }
            ok = (
                report["gamma"]["unit"]
                and report["gamma"]["inverse_is_conjugate"]
                and report["class_number"]["-7"] == 1
                and principal
                and all(sl3_samples)
                and all(isometries.values())
            )
            result = {"success": ok, "report": report}
            if not ok:
                result["error"] = "a pinned check failed"
                result["error_type"] = "verification"
            return result
        except Exception as e:
            return _failure(e)


