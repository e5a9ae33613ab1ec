import time
from functools import partial
from typing import List

import numpy as np

from fundgroup.domain.errors import FundGroupError
from fundgroup.domain.models import SessionConfig
from fundgroup.kernel.system.config import DEFAULT_SESSION_CONFIG
from fundgroup.kernel.system.logging import get_logger
from fundgroup.services.selftest import golden, properties
from fundgroup.services.selftest.models import Check, CheckFailure, CheckResult

logger = get_logger("selftest")


class SelfTestRunner:
    """
    Golden computations followed by the seeded property suites.

    The numpy Generator is created once from config.seed and shared by every suite in
    order, so a run is reproducible for a fixed seed and case count.
    """

    def __init__(self, config: SessionConfig = DEFAULT_SESSION_CONFIG):
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self.models = golden.GoldenModels(config.bounds)
        self.envelopes = properties.EnvelopeSuite(config.bounds)

    def checks(self) -> List[Check]:
        cases = self.config.cases
        rng = self.rng
        bounds = self.config.bounds
        return [
            ("M2 + M3 and weighted isomorphism", partial(golden.check_matrix, self.models)),
            ("2^inf + 2^inf + 3^inf", partial(golden.check_prime, self.models)),
            ("2^inf (x) C^2", partial(golden.check_tensor, self.models)),
            ("A_sqrt5 + A_sqrt5'", partial(golden.check_irr, self.models)),
            ("A_unit, A_zid, A_S for n = 2..4", partial(golden.check_unit_and_symmetric, self.models)),
            ("A_(1,1), A_(1,theta), irratio2", partial(golden.check_theta_pairs, self.models)),
            ("simpleaf pairing", partial(golden.check_simpleaf_channel, self.models)),
            ("simpleaf Bratteli traces", golden.check_bratteli_simpleaf),
            ("prime2 Bratteli traces", golden.check_bratteli_prime2),
            ("decompose round trip", lambda: properties.decompose_roundtrip(rng, cases)),
            ("monomial product rule", lambda: properties.product_rule(rng, cases)),
            ("quadratic field arithmetic", lambda: properties.scalar_ring(rng, cases)),
            ("lattice membership", lambda: properties.lattice_membership(rng, cases)),
            ("stabilizer and transporter", lambda: properties.stabilizer_transporter(rng, max(1, cases // 10), bounds)),
            ("envelope soundness", lambda: self.envelopes.soundness(rng, max(1, cases // 10))),
            ("conjugation equivariance", lambda: self.envelopes.equivariance(rng, self.config.equivariance_cases)),
            ("planted envelope symmetries", lambda: self.envelopes.planted(rng, self.config.equivariance_cases)),
            ("Pell units d <= 50", properties.pell_units),
            ("log-prime symbol pairs", lambda: properties.random_symbol_pairs(rng, 20, bounds)),
        ]

    def run_check(self, check: Check) -> CheckResult:
        name = check[0]
        start = time.perf_counter()
        try:
            detail = check[1]()
            result = CheckResult(name, True, detail)
        except CheckFailure as exc:
            result = CheckResult(name, False, str(exc))
        except FundGroupError as exc:
            result = CheckResult(name, False, f"{type(exc).__name__}: {exc}")
        logger.info("%s: %s in %.2fs", name, "ok" if result.passed else "FAIL", time.perf_counter() - start)
        return result

    def run(self) -> List[CheckResult]:
        return [self.run_check(check) for check in self.checks()]
