# Fast Pipelines
"""
Sublinear pipelines: segment the path, group reduced segment starts, and
evaluate each group from one integral table at its representative.

Algorithm (per group with representative v):
1. For each member x, bound the conjugated displacement over the segment
   and pick the smallest expansion order meeting T^{-γ}
2. The grouping radius keeps those orders within MAX_GROUP_ORDER; a member
   that still needs more is evaluated on its own
3. One IntegralTable at v serves every remaining member through its
   coefficient table: Σ_{β,l} c_{β,l}/β!·I_l(v, ∂^β f̃)

Groups run on the worker pool; results are reduced in ascending group
order with compensated summation, so the thread count never changes the
output.
"""

import logging
from typing import List, NamedTuple, Optional

from lfun.config import config
from lfun.engine.direct import check_fourier_index, fourier_scale
from lfun.engine.expansion import (
    expansion_coeffs_n,
    expansion_coeffs_omega,
    member_offset,
)
from lfun.engine.grouping import SegmentGroup, group_segments
from lfun.engine.integrals import batch_I, batch_L
from lfun.engine.params import PipelineParams, PipelineResult, required_order
from lfun.engine.segments import Segment, plan_fourier_segments, plan_lvalue_segments
from lfun.forms.spec import CuspFormSpec
from lfun.geomfe import ContourSpec, assemble_L, contour_for
from lfun.geometry import reduce_to_fundamental_domain
from lfun.quadrature import _kahan_add
from lfun.workers import worker_pool


logger = logging.getLogger(__name__)


class GroupOutcome(NamedTuple):
    value: complex
    err_est: float
    jet_evals: int
    order: int
    promoted: int


class GroupEvaluator:
    """
    Evaluates one segment group along the horocycle (contour None) or
    along ω (contour given).
    """

    def __init__(self, form: CuspFormSpec, params: PipelineParams, length: float,
                 scale: float, delta: float, contour: Optional[ContourSpec] = None):
        self.form = form
        self.params = params
        self.length = length
        self.scale = scale
        self.delta = delta
        self.contour = contour
        self.growth = form.deriv_bound or 1.0
        self.cap = min(config.MAX_EXPANSION_ORDER, config.MAX_GROUP_ORDER)

    def _table(self, v, d: int):
        if self.contour is None:
            return batch_I(v, d, self.length, self.form, self.params)
        return batch_L(v, d, self.length, self.contour, self.form, self.params)

    def _coefficients(self, v, x, d: int):
        if self.contour is None:
            return expansion_coeffs_n(v, x, d, self.delta)
        return expansion_coeffs_omega(v, x, d, self.contour.scale, self.contour.direction, self.delta)

    def _offset(self, A) -> float:
        if self.contour is None:
            return member_offset(A, self.length)
        return member_offset(A, self.length, self.contour.scale, self.contour.direction)

    def _order(self, offset: float) -> Optional[int]:
        if offset == 0:
            return 0
        if self.params.d is not None:
            return self.params.d
        return required_order(offset, self.growth, self.scale, self.params.gamma, self.cap)

    def member_orders(self, group: SegmentGroup) -> List[Optional[int]]:
        """Expansion order per member, None for members evaluated on their own."""
        v_inverse = group.representative.inverse()
        orders = []
        for k, member in enumerate(group.members):
            offset = 0.0 if k == 0 else self._offset(v_inverse @ member.reduced)
            orders.append(self._order(offset))
        return orders

    def __call__(self, group: SegmentGroup) -> GroupOutcome:
        v = group.representative
        orders = self.member_orders(group)
        expanded = [o for o in orders if o is not None]
        d = max(expanded) if expanded else 0

        total, carry = 0j, 0j
        err = 0.0
        jet_evals = 0
        table = self._table(v, d)
        jet_evals += table.jet_evals
        for k, (member, order) in enumerate(zip(group.members, orders)):
            weight = member.segment.weight.to_complex()
            if k == 0:
                part = complex(table.values[0, 0])
                part_err = table.err_est
            elif order is None:
                single = self._table(member.reduced, 0)
                jet_evals += single.jet_evals
                part = complex(single.values[0, 0])
                part_err = single.err_est
            else:
                coeffs = self._coefficients(v, member.reduced, d)
                part = coeffs.contract(table.values)
                part_err = table.err_est
            total, carry = _kahan_add(total, carry, weight * part)
            err += abs(weight) * part_err
        promoted = sum(1 for o in orders[1:] if o is None)
        logger.debug("group %d: %d members, order %d, %d promoted",
                     group.index, len(group.members), d, promoted)
        return GroupOutcome(total, err, jet_evals, d, promoted)


def _reduce_groups(outcomes: List[GroupOutcome]):
    total, carry = 0j, 0j
    err = 0.0
    jet_evals = 0
    for outcome in outcomes:
        total, carry = _kahan_add(total, carry, outcome.value)
        err += outcome.err_est
        jet_evals += outcome.jet_evals
    return total, err, jet_evals


def _remainder(segment: Segment, evaluate: GroupEvaluator):
    if segment.length == 0:
        return 0j, 0.0, 0
    reduced, _ = reduce_to_fundamental_domain(segment.base)
    table = evaluate._table(reduced, 0)
    weight = segment.weight.to_complex()
    return weight * complex(table.values[0, 0]), abs(weight) * table.err_est, table.jet_evals


def fourier_fast(form: CuspFormSpec, T: int, params: PipelineParams) -> PipelineResult:
    """
    f̂(T) from grouped horocycle segments.

    Args:
        form: Cusp form
        T: Positive integer index
        params: Pipeline parameters

    Returns:
        PipelineResult; groups counts promoted members as their own groups
    """
    T = check_fourier_index(T)
    plan = plan_fourier_segments(T, params.eta)
    delta = params.grouping_radius(float(T), form.deriv_bound or 1.0, float(plan.segment_length))
    groups = group_segments(plan.segments, delta)
    evaluate = GroupEvaluator(form, params, float(plan.segment_length), float(T), delta)
    outcomes = worker_pool.map_ordered(evaluate, groups)

    total, err, jet_evals = _reduce_groups(outcomes)
    tail, tail_err, tail_evals = _remainder(plan.remainder, evaluate)
    total += tail
    scale = fourier_scale(form, T)
    group_count = len(groups) + sum(o.promoted for o in outcomes)
    logger.info("fourier_fast T=%d: %d segments, %d groups, %d jet evaluations",
                T, len(plan.segments), group_count, jet_evals + tail_evals)
    return PipelineResult(scale * total, abs(scale) * (err + tail_err), jet_evals + tail_evals,
                          group_count, len(plan.segments), params)


def lvalue_fast(form: CuspFormSpec, T: float, params: PipelineParams) -> PipelineResult:
    """
    L(f, 1/2 + iT) from grouped contour segments, assembled in log space.
    """
    contour = contour_for(form, T, params.gamma, params.precision)
    return lvalue_fast_on(form, contour, params)


def lvalue_fast_on(form: CuspFormSpec, contour: ContourSpec, params: PipelineParams) -> PipelineResult:
    plan = plan_lvalue_segments(contour, params.eta)
    delta = params.grouping_radius(contour.scale, form.deriv_bound or 1.0, plan.segment_length)
    groups = group_segments(plan.segments, delta)
    evaluate = GroupEvaluator(form, params, plan.segment_length, contour.scale, delta, contour)
    outcomes = worker_pool.map_ordered(evaluate, groups)

    total, err, jet_evals = _reduce_groups(outcomes)
    tail, tail_err, tail_evals = _remainder(plan.remainder, evaluate)
    total += tail
    value, err_note = assemble_L(contour, total, err + tail_err)
    group_count = len(groups) + sum(o.promoted for o in outcomes)
    logger.info("lvalue_fast T=%g: %d segments, %d groups, %d jet evaluations",
                contour.T, len(plan.segments), group_count, jet_evals + tail_evals)
    return PipelineResult(value, err_note, jet_evals + tail_evals, group_count,
                          len(plan.segments), params)
