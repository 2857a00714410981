use std::collections::BTreeMap;

use super::GenError;
use crate::approx::TieBreakPlan;
use crate::instance::{metric_closure, MetricInstance, StructureKind};
use crate::matrix::Matrix;
use crate::solvers::OrderPolicy;
use crate::weight::Weight;

/// A tight instance with the algorithm's worst tie-breaking and a cheap
/// reference coloring. Every pair is free, so both plans fix all colors.
#[derive(Debug, Clone)]
pub struct TightFamily {
    pub kind: StructureKind,
    pub lambda: usize,
    pub instance: MetricInstance,
    pub adversarial: TieBreakPlan,
    pub favorable: TieBreakPlan,
}

fn check_eps(eps: &Weight) -> Result<(), GenError> {
    if eps.is_zero() {
        Err(GenError::BadEps)
    } else {
        Ok(())
    }
}

fn heap_depth(h: usize) -> usize {
    (usize::BITS - 1 - h.leading_zeros()) as usize
}

fn heap_distance(mut a: usize, mut b: usize) -> usize {
    let mut d = 0;
    while a != b {
        if a > b {
            a /= 2;
        } else {
            b /= 2;
        }
        d += 1;
    }
    d
}

fn plan(bits: Vec<bool>, policy: OrderPolicy) -> TieBreakPlan {
    TieBreakPlan {
        free_pair_colors: bits.into_iter().enumerate().collect::<BTreeMap<_, _>>(),
        euler_policy: policy,
        start_node: Some(0),
    }
}

/// Two full binary trees of unit edges with `lambda` leaves each, roots
/// joined by an edge of weight `1 + eps`. Each leaf point holds two nodes,
/// each other non-root point one, and each root `3 lambda - 2`; every pair is
/// a root node and a descendant node of the same side.
pub fn gen_tight_mst(lambda: usize, eps: &Weight) -> Result<TightFamily, GenError> {
    if lambda < 2 || !lambda.is_power_of_two() {
        return Err(GenError::BadLambda(lambda, "must be a power of two, at least 2"));
    }
    check_eps(eps)?;
    let bridge = Weight::one() + eps.clone();
    // (side, heap index) of each node; pair i is nodes 2i (root) and 2i + 1.
    let mut at: Vec<(usize, usize)> = Vec::new();
    let mut adversarial = Vec::new();
    let mut favorable = Vec::new();
    for side in 0..2 {
        for h in 2..2 * lambda {
            let copies: &[bool] = if h >= lambda { &[false, true] } else { &[true] };
            for &root_red in copies {
                at.push((side, 1));
                at.push((side, h));
                adversarial.push(root_red);
                favorable.push(side == 0);
            }
        }
    }
    let n = at.len();
    let m = Matrix::from_fn(n, |u, v| {
        let ((su, hu), (sv, hv)) = (at[u], at[v]);
        if su == sv {
            Weight::from_int(heap_distance(hu, hv) as u64)
        } else {
            Weight::from_int((heap_depth(hu) + heap_depth(hv)) as u64) + bridge.clone()
        }
    });
    let points = at.iter().map(|&(s, h)| vec![Weight::from_int(s as u64), Weight::from_int(h as u64)]).collect();
    let instance = MetricInstance::new(n / 2, m)?
        .with_points(points)?
        .with_meta(serde_json::json!({"family": "tight-mst", "lambda": lambda, "eps": eps}));
    Ok(TightFamily {
        kind: StructureKind::SpanningTree,
        lambda,
        instance,
        adversarial: plan(adversarial, OrderPolicy::IndexAscending),
        favorable: plan(favorable, OrderPolicy::IndexAscending),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CatPoint {
    Hub,
    Spine(usize),
    LeafA(usize),
    LeafB(usize),
}

/// Two caterpillars: spine `l_0 .. l_lambda` of unit edges, two leaves at
/// distance `eps` from every `l_j` with `j >= 1`, closing edge
/// `l_lambda l_0` and bridge `l_0^L l_0^R` of weight `1 + eps`. Each hub
/// `l_0` holds `3 lambda` nodes, every other point one; distances are
/// shortest paths.
pub fn gen_tight_tsp(lambda: usize, eps: &Weight) -> Result<TightFamily, GenError> {
    if lambda < 2 || lambda % 2 == 1 {
        return Err(GenError::BadLambda(lambda, "must be even, at least 2"));
    }
    check_eps(eps)?;
    let one_eps = Weight::one() + eps.clone();
    let side_points = 3 * lambda + 1;
    let local = |p: CatPoint| match p {
        CatPoint::Hub => 0,
        CatPoint::Spine(j) => 3 * j - 2,
        CatPoint::LeafA(j) => 3 * j - 1,
        CatPoint::LeafB(j) => 3 * j,
    };
    let n_points = 2 * side_points;
    let mut partial: Vec<Vec<Option<Weight>>> = vec![vec![None; n_points]; n_points];
    let mut link = |a: usize, b: usize, w: &Weight| {
        partial[a][b] = Some(w.clone());
        partial[b][a] = Some(w.clone());
    };
    for side in 0..2 {
        let id = |p: CatPoint| side * side_points + local(p);
        for j in 1..=lambda {
            let prev = if j == 1 { CatPoint::Hub } else { CatPoint::Spine(j - 1) };
            link(id(prev), id(CatPoint::Spine(j)), &Weight::one());
            link(id(CatPoint::Spine(j)), id(CatPoint::LeafA(j)), eps);
            link(id(CatPoint::Spine(j)), id(CatPoint::LeafB(j)), eps);
        }
        link(id(CatPoint::Spine(lambda)), id(CatPoint::Hub), &one_eps);
    }
    link(0, side_points, &one_eps);
    let far = Weight::from_int(4 * lambda as u64 + 4);
    let dist = metric_closure(&partial, &far)?;

    let mut at = Vec::new();
    let mut adversarial = Vec::new();
    let mut favorable = Vec::new();
    let mut adv_rank = Vec::new();
    let mut fav_rank = Vec::new();
    for side in 0..2 {
        for j in 1..=lambda {
            for (p, adv, fav) in [(CatPoint::Spine(j), 1, 1), (CatPoint::LeafA(j), 0, 0), (CatPoint::LeafB(j), 2, 0)] {
                at.push(side * side_points);
                at.push(side * side_points + local(p));
                // Point colored blue exactly for odd j.
                adversarial.push(j % 2 == 1);
                favorable.push(side == 0);
                adv_rank.extend([0, adv]);
                fav_rank.extend([0, fav]);
            }
        }
    }
    // The bridge leads to the first right hub node; take it last.
    let right_center = 6 * lambda;
    adv_rank[right_center] = 3;
    fav_rank[right_center] = 3;
    let n = at.len();
    let m = Matrix::from_fn(n, |u, v| dist.get(at[u], at[v]).clone());
    let points = at.iter().map(|&p| vec![Weight::from_int(p as u64)]).collect();
    let instance = MetricInstance::new(n / 2, m)?
        .with_points(points)?
        .with_meta(serde_json::json!({"family": "tight-tsp", "lambda": lambda, "eps": eps}));
    Ok(TightFamily {
        kind: StructureKind::Tour,
        lambda,
        instance,
        adversarial: plan(adversarial, OrderPolicy::ExplicitPermutation(adv_rank)),
        favorable: plan(favorable, OrderPolicy::ExplicitPermutation(fav_rank)),
    })
}

/// One co-located pair per city of `base`.
pub fn lift_colocated(base: &Matrix<Weight>) -> Result<MetricInstance, GenError> {
    let m = base.size();
    if m == 0 {
        return Err(GenError::EmptyBase);
    }
    let w = Matrix::from_fn(2 * m, |u, v| base.get(u / 2, v / 2).clone());
    Ok(MetricInstance::new(m, w)?.with_meta(serde_json::json!({"family": "lift", "cities": m})))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_metric;

    #[test]
    fn heap_helpers() {
        assert_eq!(heap_depth(1), 0);
        assert_eq!(heap_depth(7), 2);
        assert_eq!(heap_distance(4, 7), 4);
        assert_eq!(heap_distance(4, 5), 2);
        assert_eq!(heap_distance(2, 5), 1);
    }

    #[test]
    fn tight_mst_sizes() {
        let eps = Weight::ratio(1, 8);
        for (lambda, nodes) in [(2, 16), (4, 40), (8, 88)] {
            let f = gen_tight_mst(lambda, &eps).unwrap();
            assert_eq!(f.instance.n_nodes(), nodes);
            assert!(validate_metric(&f.instance).is_empty());
        }
        assert!(matches!(gen_tight_mst(3, &eps), Err(GenError::BadLambda(3, _))));
        assert_eq!(gen_tight_mst(2, &Weight::zero()).unwrap_err(), GenError::BadEps);
    }

    #[test]
    fn tight_tsp_sizes() {
        let eps = Weight::ratio(1, 8);
        let f = gen_tight_tsp(2, &eps).unwrap();
        assert_eq!(f.instance.n_nodes(), 24);
        let pts: std::collections::BTreeSet<_> = f.instance.points().unwrap().iter().cloned().collect();
        assert_eq!(pts.len(), 14);
        assert!(validate_metric(&f.instance).is_empty());
        assert!(matches!(gen_tight_tsp(3, &eps), Err(GenError::BadLambda(3, _))));
    }

    #[test]
    fn lift_shape() {
        let base = Matrix::from_fn(3, |u, v| if u == v { Weight::zero() } else { Weight::one() });
        let l = lift_colocated(&base).unwrap();
        assert_eq!(l.n_pairs(), 3);
        assert!(l.w(0, 1).is_zero());
        assert_eq!(l.w(1, 2), &Weight::one());
    }
}
