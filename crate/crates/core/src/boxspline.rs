//! Directional box-spline tight framelet filter banks obtained by projecting
//! the Haar bank, and the even-shift reductions of their high-pass filters.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;

use crate::census::DirectionVector;
use crate::coeff::RadCoeff;
use crate::error::{Error, Result};
use crate::filter::{Filter, FilterBank, TwoTap};
use crate::format::fmt_f64;
use crate::lattice::{cube_vertices, IntVec};
use crate::projector::{boxspline_mask, fiber_sizes, project_filter, DirectionMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BankMode {
    /// One projected filter per Haar edge, zero projections dropped.
    Projected,
    /// One filter per pair of mask support points, weighted by fiber sizes.
    Combined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    /// Merge shift-equivalent filters of equal weight two at a time.
    EqualWeightPairs,
    /// Merge every shift-equivalence class into one filter.
    FullClass,
}

pub fn build_boxspline_bank(p: &DirectionMatrix, mode: BankMode) -> Result<FilterBank> {
    let mask = boxspline_mask(p)?;
    let n = p.cols();
    let highpass = match mode {
        BankMode::Projected => {
            let weight = RadCoeff::pow2_inv(n as u32);
            let vertices: Vec<_> = cube_vertices(n).collect();
            let mut out = Vec::new();
            for (i, g1) in vertices.iter().enumerate() {
                for g2 in &vertices[i + 1..] {
                    let b = Filter::two_tap(g1.clone(), g2.clone(), weight.clone())?;
                    let pb = project_filter(p, &b)?;
                    if !pb.is_empty() {
                        out.push(pb);
                    }
                }
            }
            out
        }
        BankMode::Combined => {
            let fibers = fiber_sizes(p)?;
            let scale = RadCoeff::pow2_inv(n as u32);
            let mut out = Vec::with_capacity(fibers.len() * fibers.len().saturating_sub(1) / 2);
            for (i, (g1, m1)) in fibers.iter().enumerate() {
                for (g2, m2) in &fibers[i + 1..] {
                    let root = RadCoeff::sqrt_of(1, (m1 * m2) as i64, 1);
                    out.push(Filter::two_tap(g1.clone(), g2.clone(), scale.mul(&root))?);
                }
            }
            out
        }
    };
    FilterBank::new(mask, highpass)
}

/// Two edges are shift-equivalent when one is the other translated by an
/// even vector: same displacement, same parity of the lower endpoint.
fn shift_class(t: &TwoTap) -> (IntVec, IntVec) {
    let (lo, hi) = t.endpoints();
    (lo.parity(), hi - lo)
}

fn merged(t: &TwoTap, radicand: BigRational) -> Result<Filter> {
    let (lo, hi) = t.endpoints();
    Filter::two_tap(lo.clone(), hi.clone(), RadCoeff::new(1, radicand)?)
}

/// Merges high-pass filters that agree up to an even shift and a scalar.
///
/// Merged filters sit at the position of their earliest member in the bank,
/// anchored at the lexicographically smallest representative with the
/// positive tap on its smaller endpoint.
pub fn reduce_bank(bank: &FilterBank, mode: ReduceMode) -> Result<FilterBank> {
    let taps = bank.two_taps()?;
    // Lexicographic scan order over (min endpoint, max endpoint).
    let mut order: Vec<usize> = (0..taps.len()).collect();
    order.sort_by(|&a, &b| {
        taps[a]
            .endpoints()
            .cmp(&taps[b].endpoints())
            .then(a.cmp(&b))
    });

    // groups: bank index of the anchor member -> members
    let mut groups: Vec<Vec<usize>> = Vec::new();
    match mode {
        ReduceMode::FullClass => {
            let mut by_class: BTreeMap<(IntVec, IntVec), usize> = BTreeMap::new();
            for &i in &order {
                let key = shift_class(&taps[i]);
                match by_class.get(&key) {
                    Some(&g) => groups[g].push(i),
                    None => {
                        by_class.insert(key, groups.len());
                        groups.push(vec![i]);
                    }
                }
            }
        }
        ReduceMode::EqualWeightPairs => {
            let mut used = vec![false; taps.len()];
            for (pos, &i) in order.iter().enumerate() {
                if used[i] {
                    continue;
                }
                used[i] = true;
                let key = shift_class(&taps[i]);
                let partner = order[pos + 1..].iter().copied().find(|&j| {
                    !used[j] && taps[j].weight == taps[i].weight && shift_class(&taps[j]) == key
                });
                match partner {
                    Some(j) => {
                        used[j] = true;
                        groups.push(vec![i, j]);
                    }
                    None => groups.push(vec![i]),
                }
            }
        }
    }

    let mut placed: Vec<(usize, Filter)> = Vec::with_capacity(groups.len());
    for g in &groups {
        let first = *g.iter().min().expect("nonempty group");
        let filter = if g.len() == 1 {
            bank.highpass()[g[0]].clone()
        } else {
            let energy = g
                .iter()
                .fold(BigRational::zero(), |acc, &i| acc + taps[i].weight.square());
            // g[0] is the lexicographically smallest member
            merged(&taps[g[0]], energy)?
        };
        placed.push((first, filter));
    }
    placed.sort_by_key(|(i, _)| *i);
    bank.with_highpass(placed.into_iter().map(|(_, f)| f).collect())
}

/// One row per high-pass filter: endpoints, squared weight, direction and,
/// for planar banks, the slope angle in degrees.
pub fn edge_csv(bank: &FilterBank) -> Result<String> {
    let mut out = String::from("gamma1,gamma2,weight_num,weight_den,direction,slope_deg\n");
    for (index, t) in bank.two_taps()?.iter().enumerate() {
        let (g1, g2) = t.endpoints();
        let dir = DirectionVector::canonical(&(g2 - g1)).ok_or(Error::NotTwoTap { index })?;
        let w2 = t.weight.square();
        let slope = dir.angle_degrees().map(fmt_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            space_joined(g1),
            space_joined(g2),
            w2.numer(),
            w2.denom(),
            space_joined(dir.vector()),
            slope
        );
    }
    Ok(out)
}

fn space_joined(v: &IntVec) -> String {
    v.entries()
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::haar::build_haar_bank;

    fn ex1() -> DirectionMatrix {
        DirectionMatrix::from_rows(vec![vec![1, 0, -1], vec![0, 1, -1]]).unwrap()
    }

    fn ex2() -> DirectionMatrix {
        DirectionMatrix::from_rows(vec![vec![1, 0, -1, 0], vec![0, 1, 0, -1]]).unwrap()
    }

    fn weight_multiset(b: &FilterBank) -> BTreeMap<BigRational, usize> {
        let mut m = BTreeMap::new();
        for t in b.two_taps().unwrap() {
            *m.entry(t.weight.square().clone()).or_default() += 1;
        }
        m
    }

    #[test]
    fn ex1_combined_weights() {
        let b = build_boxspline_bank(&ex1(), BankMode::Combined).unwrap();
        assert_eq!(b.highpass().len(), 21);
        // (sqrt2/8)^2 = 1/32, (1/8)^2 = 1/64
        let want = BTreeMap::from([(rat(1, 32), 6), (rat(1, 64), 15)]);
        assert_eq!(weight_multiset(&b), want);
        for t in b.two_taps().unwrap() {
            let touches_origin = t.pos.is_zero() || t.neg.is_zero();
            assert_eq!(touches_origin, t.weight.square() == &rat(1, 32));
        }
    }

    #[test]
    fn ex2_combined_groups() {
        let b = build_boxspline_bank(&ex2(), BankMode::Combined).unwrap();
        assert_eq!(b.highpass().len(), 36);
        let class = |g: &IntVec| match g[0].abs() + g[1].abs() {
            0 => 0,
            1 => 2,
            _ => 1,
        };
        // (class pair) -> (count, squared weight); 0 origin, 1 corners S1, 2 edges S2
        let mut seen: BTreeMap<(u8, u8), (usize, BigRational)> = BTreeMap::new();
        for t in b.two_taps().unwrap() {
            let (a, c) = (class(&t.pos), class(&t.neg));
            let key = (a.min(c), a.max(c));
            let e = seen.entry(key).or_insert((0, t.weight.square().clone()));
            assert_eq!(&e.1, t.weight.square());
            e.0 += 1;
        }
        let want = BTreeMap::from([
            ((0, 1), (4, rat(1, 64))),   // 1/8
            ((0, 2), (4, rat(1, 32))),   // sqrt2/8
            ((1, 2), (16, rat(1, 128))), // sqrt2/16
            ((1, 1), (6, rat(1, 256))),  // 1/16
            ((2, 2), (6, rat(1, 64))),   // 1/8
        ]);
        assert_eq!(seen, want);
    }

    #[test]
    fn identity_matrix_reproduces_haar() {
        for d in 1..=3 {
            let b =
                build_boxspline_bank(&DirectionMatrix::identity(d), BankMode::Combined).unwrap();
            assert_eq!(b, build_haar_bank(d).unwrap());
        }
    }

    #[test]
    fn projected_mode_drops_zero_filters() {
        let b = build_boxspline_bank(&ex1(), BankMode::Projected).unwrap();
        // 28 Haar edges, one collapses ((0,0,0)-(1,1,1))
        assert_eq!(b.highpass().len(), 27);
        for t in b.two_taps().unwrap() {
            assert_eq!(t.weight, RadCoeff::pow2_inv(3));
        }
    }

    #[test]
    fn ex2_reductions_reach_thirty() {
        let b = build_boxspline_bank(&ex2(), BankMode::Combined).unwrap();
        let pairs = reduce_bank(&b, ReduceMode::EqualWeightPairs).unwrap();
        assert_eq!(pairs.highpass().len(), 30);
        let full = reduce_bank(&b, ReduceMode::FullClass).unwrap();
        assert_eq!(full.highpass().len(), 30);
    }

    #[test]
    fn pair_merges_include_horizontal_edges() {
        let b = build_boxspline_bank(&ex2(), BankMode::Combined).unwrap();
        let pairs = reduce_bank(&b, ReduceMode::EqualWeightPairs).unwrap();
        let merged: Vec<_> = pairs
            .two_taps()
            .unwrap()
            .into_iter()
            .filter(|t| {
                !b.two_taps()
                    .unwrap()
                    .iter()
                    .any(|u| u.weight == t.weight && u.endpoints() == t.endpoints())
            })
            .collect();
        assert_eq!(merged.len(), 6);
        let ends: Vec<(IntVec, IntVec)> = merged
            .iter()
            .map(|t| (t.endpoints().0.clone(), t.endpoints().1.clone()))
            .collect();
        // {(-1,-1),(-1,1)} merged with {(1,-1),(1,1)}
        assert!(ends.contains(&(IntVec::from([-1, -1]), IntVec::from([-1, 1]))));
        // {(0,-1),(1,-1)} merged with {(0,1),(1,1)}
        assert!(ends.contains(&(IntVec::from([0, -1]), IntVec::from([1, -1]))));
        // {(-1,-1),(0,-1)} merged with {(-1,1),(0,1)}
        assert!(ends.contains(&(IntVec::from([-1, -1]), IntVec::from([0, -1]))));
    }

    #[test]
    fn identical_filters_combine() {
        let base = build_haar_bank(1).unwrap();
        let c1 = RadCoeff::sqrt_of(1, 1, 16);
        let c2 = RadCoeff::sqrt_of(-1, 3, 16);
        let b = Filter::two_tap(IntVec::from([0]), IntVec::from([1]), RadCoeff::one()).unwrap();
        let bank = base
            .with_highpass(vec![b.scaled(&c1), b.scaled(&c2)])
            .unwrap();
        let r = reduce_bank(&bank, ReduceMode::FullClass).unwrap();
        assert_eq!(r.highpass().len(), 1);
        // sqrt(1/16 + 3/16) = 1/2
        assert_eq!(r.highpass()[0], b.scaled(&RadCoeff::sqrt_of(1, 1, 4)));
        // unequal weights stay apart in pair mode
        assert_eq!(
            reduce_bank(&bank, ReduceMode::EqualWeightPairs)
                .unwrap()
                .highpass()
                .len(),
            2
        );
    }

    #[test]
    fn reduce_requires_two_tap() {
        let b = build_haar_bank(1).unwrap();
        let bad = b.with_highpass(vec![b.lowpass().clone()]).unwrap();
        assert!(matches!(
            reduce_bank(&bad, ReduceMode::FullClass),
            Err(Error::NotTwoTap { index: 0 })
        ));
    }

    #[test]
    fn edge_csv_rows() {
        let b = build_boxspline_bank(&ex1(), BankMode::Combined).unwrap();
        let csv = edge_csv(&b).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 22);
        assert_eq!(
            lines[0],
            "gamma1,gamma2,weight_num,weight_den,direction,slope_deg"
        );
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
        let haar3 = edge_csv(&build_haar_bank(3).unwrap()).unwrap();
        assert!(haar3.lines().nth(1).unwrap().ends_with(','));
    }
}
