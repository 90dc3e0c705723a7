//! Sampled exact-identity checks between the calculi. Comparisons are
//! agreement on the joint known window; a single mismatch is a red alarm,
//! since each identity is a theorem on strict tuples.

use super::affine::TransportedQuotient;
use super::dd::{divided_difference, divided_difference_recursive, DividedDifferenceMap};
use super::dq::difference_quotient;
use super::flatten_multiindex;
use crate::domains::{BallDomain, BlockPoint, MultiIndex, Sampler};
use crate::error::{EngineError, Result};
use crate::field::LaurentSeries;
use crate::report::{Failure, IdentityReport};
use crate::runtime::parallel_map;
use crate::MapKd;

/// Shared knobs for the sampled checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub samples: usize,
    pub prec: i64,
    pub seed: u64,
}

fn values_agree(a: &[LaurentSeries], b: &[LaurentSeries]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.agrees_with(y))
}

fn render(values: &[LaurentSeries]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

struct Outcome {
    point: Vec<LaurentSeries>,
    lhs: Vec<LaurentSeries>,
    rhs: Vec<LaurentSeries>,
}

fn assemble(
    op: &str,
    u: &BallDomain,
    cfg: &CheckConfig,
    outcomes: Vec<Result<Outcome>>,
) -> Result<IdentityReport> {
    let mut exact_matches = 0;
    let mut failures = Vec::new();
    let samples = outcomes.len();
    for outcome in outcomes {
        let o = outcome?;
        if values_agree(&o.lhs, &o.rhs) {
            exact_matches += 1;
        } else {
            failures.push(Failure {
                point: render(&o.point),
                lhs: render(&o.lhs),
                rhs: render(&o.rhs),
            });
        }
    }
    Ok(IdentityReport {
        op: op.to_string(),
        field_p: u.field().modulus(),
        prec: cfg.prec,
        seed: cfg.seed,
        samples,
        exact_matches,
        failures,
    })
}

fn run_sampled<F>(op: &str, u: &BallDomain, cfg: &CheckConfig, per_sample: F) -> Result<IdentityReport>
where
    F: Fn(&mut Sampler) -> Result<Outcome> + Sync,
{
    let outcomes = parallel_map((0..cfg.samples as u64).collect(), |i| {
        let mut sampler = Sampler::new(u.field(), cfg.prec, cfg.seed.wrapping_add(i));
        per_sample(&mut sampler)
    });
    assemble(op, u, cfg, outcomes)
}

/// First directional quotient against the weighted sum of first partial
/// divided differences at shifted arguments:
///
/// ```text
/// (f(x+ty) - f(x))/t = sum_j y_j f^{<e_j>}(x_1+t y_1; ...; x_j, x_j+t y_j; ...; x_d)
/// ```
///
/// A summand with y_j = 0 is dropped exactly.
pub fn check_fviaphi(f: &dyn MapKd, u: &BallDomain, cfg: &CheckConfig) -> Result<IdentityReport> {
    let d = f.arity();
    assert_eq!(d, u.dim());
    run_sampled("fviaphi", u, cfg, |sampler| {
        let x = sampler.point(u);
        let t = sampler.nonzero_scalar(3);
        let tv = t.valuation().unwrap();
        let field = u.field();
        let y: Vec<LaurentSeries> = (0..d)
            .map(|i| {
                if sampler.gen_bool(0.1) {
                    LaurentSeries::zero(field)
                } else {
                    // t*y_i must stay inside ball i so that x + t y is in U
                    let v = sampler_range(sampler, u.radius_exp(i) - tv, cfg.prec - 4);
                    sampler.unit_with_valuation(v)
                }
            })
            .collect();

        let lhs = difference_quotient(f, &x, &y, &t)?;

        let mut rhs: Option<Vec<LaurentSeries>> = None;
        for j in 0..d {
            if y[j].is_exactly_zero() {
                continue;
            }
            let yj = &y[j];
            if yj.valuation().is_none() {
                return Err(EngineError::UndecidableAtPrecision(
                    "direction component neither exactly zero nor certified nonzero".into(),
                ));
            }
            let mut coords = Vec::with_capacity(d + 1);
            for (i, xi) in x.iter().enumerate() {
                let shifted = xi.add(&t.mul(&y[i]));
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => coords.push(shifted),
                    std::cmp::Ordering::Equal => {
                        coords.push(xi.clone());
                        coords.push(shifted);
                    }
                    std::cmp::Ordering::Greater => coords.push(xi.clone()),
                }
            }
            let point = BlockPoint::new(MultiIndex::unit(d, j + 1), coords)?;
            let dd = divided_difference(f, &point)?;
            let term: Vec<LaurentSeries> = dd.iter().map(|v| v.mul(yj)).collect();
            rhs = Some(match rhs {
                None => term,
                Some(acc) => acc.iter().zip(&term).map(|(a, b)| a.add(b)).collect(),
            });
        }
        let rhs =
            rhs.unwrap_or_else(|| vec![LaurentSeries::zero(u.field()); f.coarity()]);

        let mut point = x;
        point.extend(y);
        point.push(t);
        Ok(Outcome { point, lhs, rhs })
    })
}

fn sampler_range(sampler: &mut Sampler, lo: i64, hi: i64) -> i64 {
    let lo = lo.min(hi);
    let hi = (lo + 3).min(hi).max(lo);
    sampler.gen_range(lo..=hi)
}

/// Composition law: a divided difference of a divided difference is the
/// divided difference for the flattened multi-index, on the same flat tuple.
pub fn check_simpfml(
    f: &dyn MapKd,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    u: &BallDomain,
    cfg: &CheckConfig,
) -> Result<IdentityReport> {
    let gamma = alpha.add(&flatten_multiindex(alpha, beta)?);
    let expanded = u.angle_expand(alpha);
    run_sampled("simpfml", u, cfg, |sampler| {
        let mut found = None;
        for _ in 0..10_000 {
            let candidate = sampler.block_point(&expanded, beta, 0)?;
            let all_strict = candidate.selections().all(|picks| {
                let w = candidate.selection(&picks);
                BlockPoint::new(alpha.clone(), w).is_ok_and(|bp| bp.is_strict())
            });
            if all_strict {
                found = Some(candidate);
                break;
            }
        }
        let Some(z) = found else {
            return Err(EngineError::SamplerExhausted { attempts: 10_000 });
        };
        let g = DividedDifferenceMap::new(f, alpha.clone());
        let lhs = divided_difference(&g, &z)?;
        let regrouped = BlockPoint::new(gamma.clone(), z.flat().to_vec())?;
        let rhs = divided_difference(f, &regrouped)?;
        Ok(Outcome {
            point: z.flat().to_vec(),
            lhs,
            rhs,
        })
    })
}

/// Transport: the direct divided difference equals the iterated quotient
/// after the affine change of variables.
pub fn check_transport(
    f: &dyn MapKd,
    alpha: &MultiIndex,
    u: &BallDomain,
    cfg: &CheckConfig,
) -> Result<IdentityReport> {
    let through_quotients = TransportedQuotient::new(f, alpha.clone());
    run_sampled("theta", u, cfg, |sampler| {
        let x = sampler.block_point(u, alpha, 0)?;
        let lhs = divided_difference(f, &x)?;
        let rhs = through_quotients.eval(x.flat())?;
        Ok(Outcome {
            point: x.flat().to_vec(),
            lhs,
            rhs,
        })
    })
}

/// Block-permutation invariance of the direct divided difference. One
/// sampled point contributes one case per non-identity block permutation.
pub fn check_symmetry(
    f: &dyn MapKd,
    alpha: &MultiIndex,
    u: &BallDomain,
    cfg: &CheckConfig,
) -> Result<IdentityReport> {
    run_sampled("symmetry", u, cfg, |sampler| {
        let x = sampler.block_point(u, alpha, 0)?;
        let base = divided_difference(f, &x)?;
        for i in 0..alpha.dim() {
            let len = alpha.block_len(i);
            if len < 2 {
                continue;
            }
            for perm in permutations(len) {
                let mut values = x.flat().to_vec();
                let start = alpha.block_start(i);
                let block: Vec<LaurentSeries> =
                    perm.iter().map(|&j| x.block(i)[j].clone()).collect();
                values[start..start + len].clone_from_slice(&block);
                let permuted = BlockPoint::new(alpha.clone(), values)?;
                let v = divided_difference(f, &permuted)?;
                if !values_agree(&base, &v) {
                    return Ok(Outcome {
                        point: permuted.flat().to_vec(),
                        lhs: v,
                        rhs: base,
                    });
                }
            }
        }
        Ok(Outcome {
            point: x.flat().to_vec(),
            lhs: base.clone(),
            rhs: base,
        })
    })
}

/// Direct sum formula against the first-coordinate recursion.
pub fn check_recursion(
    f: &dyn MapKd,
    alpha: &MultiIndex,
    u: &BallDomain,
    cfg: &CheckConfig,
) -> Result<IdentityReport> {
    run_sampled("recursion", u, cfg, |sampler| {
        let x = sampler.block_point(u, alpha, 0)?;
        let lhs = divided_difference(f, &x)?;
        let rhs = divided_difference_recursive(f, &x)?;
        Ok(Outcome {
            point: x.flat().to_vec(),
            lhs,
            rhs,
        })
    })
}

/// All permutations of {0, .., n-1} in a deterministic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}
