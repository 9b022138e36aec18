use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::{check_prime, scale, sub, AffineSemigroup, SemigroupError};

/// Default cap on `e` when searching for `p^e·a ∈ A`.
pub const DEFAULT_E_MAX: u32 = 12;
/// Default saturation box, as a multiple of the coordinatewise maximum of
/// the generators.
pub const DEFAULT_BOX_FACTOR: i64 = 3;
const BOX_RETRIES: u32 = 2;
const MAX_BOX_POINTS: u128 = 20_000_000;

/// Saturation points in the enumeration box together with the Hilbert
/// basis extracted from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Saturation {
    /// Sorted by degree, then lexicographically descending.
    pub hilbert_basis: Vec<Vec<i64>>,
    pub box_bound: Vec<i64>,
    /// Nonzero points of `Ā` inside the box, in the same order.
    pub points: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Certificate {
    /// No multiple of the vector lies in the saturation.
    OutsideSaturation,
    /// `face` lists the facet normals vanishing at the vector; `order` is the
    /// order of the vector modulo the group of the generators on that face,
    /// which is not a power of `p` (`None`: infinite).
    Torsion { face: Vec<Vec<i64>>, face_generators: Vec<Vec<i64>>, order: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum EventualMembership {
    Yes { e: u32 },
    No { certificate: Certificate },
    Undetermined { e_max: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum PureInseparability {
    Index { e0: u32 },
    NotPurelyInseparable { witness: Vec<i64>, certificate: Certificate },
    Undetermined { elements: Vec<Vec<i64>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum FVerdict {
    FNilpotent { e0: u32 },
    NotFNilpotent { witness: Vec<i64>, certificate: Certificate },
    Undetermined { e_max: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementEvidence {
    pub element: Vec<i64>,
    pub result: EventualMembership,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FNilpotencyReport {
    pub p: u64,
    pub e_max: u32,
    pub verdict: FVerdict,
    pub hilbert_basis: Vec<Vec<i64>>,
    pub per_element: Vec<ElementEvidence>,
}

impl FNilpotencyReport {
    pub fn e0(&self) -> Option<u32> {
        match self.verdict {
            FVerdict::FNilpotent { e0 } => Some(e0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakNormalization {
    pub generators: Vec<Vec<i64>>,
    /// Saturation points in the box whose eventual membership was not
    /// settled within the search cap.
    pub undetermined: Vec<Vec<i64>>,
}

fn degree(v: &[i64]) -> i64 {
    v.iter().sum()
}

fn by_degree(a: &Vec<i64>, b: &Vec<i64>) -> std::cmp::Ordering {
    degree(a).cmp(&degree(b)).then_with(|| b.cmp(a))
}

fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Elements of `set` (sorted by degree) not expressible as `h + w` with `h`
/// an earlier minimal element and `w ∈ set`.
fn minimal_elements(sorted: &[Vec<i64>], set: &HashSet<Vec<i64>>) -> Result<Vec<Vec<i64>>, SemigroupError> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for v in sorted {
        let mut reducible = false;
        for h in &out {
            if h != v && leq(h, v) && set.contains(&sub(v, h)?) {
                reducible = true;
                break;
            }
        }
        if !reducible {
            out.push(v.clone());
        }
    }
    Ok(out)
}

fn is_power_of(mut m: u64, p: u64) -> bool {
    while m > 1 && m % p == 0 {
        m /= p;
    }
    m == 1
}

impl AffineSemigroup {
    /// Lattice points of the cone inside the enumeration box.
    pub fn saturation(&self) -> Result<&Saturation, SemigroupError> {
        self.saturation.get_or_init(|| self.compute_saturation()).as_ref().map_err(Clone::clone)
    }

    /// Minimal generators of `Ā = group(A) ∩ cone(A)`.
    pub fn saturation_hilbert_basis(&self) -> Result<Vec<Vec<i64>>, SemigroupError> {
        Ok(self.saturation()?.hilbert_basis.clone())
    }

    pub fn in_saturation(&self, v: &[i64]) -> Result<bool, SemigroupError> {
        self.check_vector(v)?;
        Ok(v.iter().all(|&x| x >= 0) && self.cone()?.contains(v)? && self.lattice()?.contains(v)?)
    }

    fn compute_saturation(&self) -> Result<Saturation, SemigroupError> {
        let cone = self.cone()?;
        let lattice = self.lattice()?;
        let n = self.n;
        let r = lattice.rank();
        // Every Hilbert basis element is a combination of at most r
        // generators with coefficients in [0, 1), so this bounds them.
        let mut needed = vec![0i64; n];
        let mut maxes = vec![0i64; n];
        for i in 0..n {
            let mut col: Vec<i64> = self.generators.iter().map(|g| g[i]).collect();
            col.sort_unstable_by(|a, b| b.cmp(a));
            maxes[i] = col[0];
            needed[i] = col.iter().take(r).try_fold(0i64, |s, &x| s.checked_add(x)).ok_or(SemigroupError::Overflow)?;
        }
        let mut factor = self.box_factor;
        let mut box_bound = scale(factor, &maxes)?;
        for _ in 0..BOX_RETRIES {
            if leq(&needed, &box_bound) {
                break;
            }
            factor = factor.checked_mul(2).ok_or(SemigroupError::Overflow)?;
            box_bound = scale(factor, &maxes)?;
        }
        if !leq(&needed, &box_bound) {
            return Err(SemigroupError::BasisNotClosed { box_bound });
        }
        let count: u128 = box_bound.iter().map(|&b| b as u128 + 1).product();
        if count > MAX_BOX_POINTS {
            return Err(SemigroupError::BoxTooLarge { points: count, cap: MAX_BOX_POINTS });
        }
        let mut points = Vec::new();
        let mut v = vec![0i64; n];
        'outer: loop {
            let mut i = n;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if v[i] < box_bound[i] {
                    v[i] += 1;
                    break;
                }
                v[i] = 0;
            }
            if cone.contains(&v)? && lattice.contains(&v)? {
                points.push(v.clone());
            }
        }
        points.sort_by(by_degree);
        let set: HashSet<Vec<i64>> = points.iter().cloned().collect();
        let hilbert_basis = minimal_elements(&points, &set)?;
        Ok(Saturation { hilbert_basis, box_bound, points })
    }

    /// Decides whether `p^e·a ∈ A` for some `e`. A negative answer comes with
    /// a certificate read off the smallest face of the cone containing `a`;
    /// a positive one with the least such `e`, searched up to `e_max`.
    pub fn eventual_p_membership(&self, a: &[i64], p: u64, e_max: u32) -> Result<EventualMembership, SemigroupError> {
        self.check_vector(a)?;
        check_prime(p)?;
        if a.iter().all(|&x| x == 0) {
            return Ok(EventualMembership::Yes { e: 0 });
        }
        if !self.in_saturation(a)? {
            return Ok(EventualMembership::No { certificate: Certificate::OutsideSaturation });
        }
        let cone = self.cone()?;
        let face = cone.face_of(a)?;
        let mut face_generators = Vec::new();
        for g in &self.generators {
            if cone.on_face(&face, g)? {
                face_generators.push(g.clone());
            }
        }
        let order = Lattice::spanned_by(self.n, &face_generators)?.order_of(a)?;
        if !order.is_some_and(|m| is_power_of(m, p)) {
            let face = face.iter().map(|&i| cone.facets()[i].clone()).collect();
            return Ok(EventualMembership::No { certificate: Certificate::Torsion { face, face_generators, order } });
        }
        let p = i64::try_from(p).map_err(|_| SemigroupError::Overflow)?;
        let mut q = 1i64;
        for e in 0..=e_max {
            if e > 0 {
                q = q.checked_mul(p).ok_or(SemigroupError::Overflow)?;
            }
            match self.membership(&scale(q, a)?) {
                Ok(true) => return Ok(EventualMembership::Yes { e }),
                Ok(false) | Err(SemigroupError::BudgetExhausted(_)) => {}
                Err(other) => return Err(other),
            }
        }
        Ok(EventualMembership::Undetermined { e_max })
    }

    /// F-nilpotence of `k[A]` in characteristic `p`, decided on the Hilbert
    /// basis of the saturation.
    pub fn is_f_nilpotent(&self, p: u64, e_max: u32) -> Result<FNilpotencyReport, SemigroupError> {
        check_prime(p)?;
        let hilbert_basis = self.saturation_hilbert_basis()?;
        let mut per_element = Vec::with_capacity(hilbert_basis.len());
        for h in &hilbert_basis {
            per_element.push(ElementEvidence { element: h.clone(), result: self.eventual_p_membership(h, p, e_max)? });
        }
        let no = per_element.iter().find_map(|ev| match &ev.result {
            EventualMembership::No { certificate } => Some((ev.element.clone(), certificate.clone())),
            _ => None,
        });
        let verdict = if let Some((witness, certificate)) = no {
            FVerdict::NotFNilpotent { witness, certificate }
        } else if per_element.iter().any(|ev| matches!(ev.result, EventualMembership::Undetermined { .. })) {
            FVerdict::Undetermined { e_max }
        } else {
            let e0 = per_element.iter().filter_map(|ev| match ev.result {
                EventualMembership::Yes { e } => Some(e),
                _ => None,
            });
            FVerdict::FNilpotent { e0: e0.max().unwrap_or(0) }
        };
        Ok(FNilpotencyReport { p, e_max, verdict, hilbert_basis, per_element })
    }

    /// Least `e_0` with `p^(e_0)·Ā ⊆ A`, when it exists.
    pub fn pure_insep_index(&self, p: u64, e_max: u32) -> Result<PureInseparability, SemigroupError> {
        let report = self.is_f_nilpotent(p, e_max)?;
        Ok(match report.verdict {
            FVerdict::FNilpotent { e0 } => PureInseparability::Index { e0 },
            FVerdict::NotFNilpotent { witness, certificate } => PureInseparability::NotPurelyInseparable { witness, certificate },
            FVerdict::Undetermined { .. } => PureInseparability::Undetermined {
                elements: report
                    .per_element
                    .into_iter()
                    .filter(|ev| matches!(ev.result, EventualMembership::Undetermined { .. }))
                    .map(|ev| ev.element)
                    .collect(),
            },
        })
    }

    /// Minimal generators of `*A` among the saturation points in the box.
    pub fn weak_normalization(&self, p: u64, e_max: u32) -> Result<WeakNormalization, SemigroupError> {
        check_prime(p)?;
        let sat = self.saturation()?;
        let mut yes = Vec::new();
        let mut undetermined = Vec::new();
        for v in &sat.points {
            match self.eventual_p_membership(v, p, e_max)? {
                EventualMembership::Yes { .. } => yes.push(v.clone()),
                EventualMembership::Undetermined { .. } => undetermined.push(v.clone()),
                EventualMembership::No { .. } => {}
            }
        }
        let set: HashSet<Vec<i64>> = yes.iter().cloned().collect();
        Ok(WeakNormalization { generators: minimal_elements(&yes, &set)?, undetermined })
    }

    fn require_members(&self, vectors: &[Vec<i64>]) -> Result<(), SemigroupError> {
        for v in vectors {
            if !self.membership(v)? {
                return Err(SemigroupError::NotInSemigroup(v.clone()));
            }
        }
        Ok(())
    }

    /// Whether `t^u` lies in the tight closure of the monomial ideal with
    /// exponents `ideal`, which for F-nilpotent `k[A]` is the single test
    /// `p^(e_0)·u ∈ p^(e_0)·v + A` for some generator `v`.
    pub fn tight_closure_membership_monomial(
        &self,
        p: u64,
        ideal: &[Vec<i64>],
        u: &[i64],
        report: &FNilpotencyReport,
    ) -> Result<bool, SemigroupError> {
        let e0 = match report.verdict {
            FVerdict::FNilpotent { e0 } if report.p == p => e0,
            _ => return Err(SemigroupError::NotFNilpotentRing),
        };
        self.check_vector(u)?;
        self.require_members(std::slice::from_ref(&u.to_vec()))?;
        for v in ideal {
            self.check_vector(v)?;
        }
        self.require_members(ideal)?;
        let q = i64::try_from(p).ok().and_then(|p| p.checked_pow(e0)).ok_or(SemigroupError::Overflow)?;
        for v in ideal {
            let d = scale(q, &sub(u, v)?)?;
            if d.iter().all(|&x| x >= 0) && self.membership(&d)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Frobenius test exponent of a monomial ideal of a numerical semigroup
    /// ring, by exhausting the elements of its Frobenius closure up to
    /// `max I + F + 1`; above that every element already lies in `I`.
    pub fn fte_bruteforce(
        &self,
        p: u64,
        ideal: &[i64],
        e_cap: u32,
        report: &FNilpotencyReport,
    ) -> Result<u32, SemigroupError> {
        check_prime(p)?;
        if !self.is_numerical() {
            return Err(SemigroupError::NotNumerical);
        }
        if ideal.is_empty() {
            return Err(SemigroupError::Empty);
        }
        let gens: Vec<Vec<i64>> = ideal.iter().map(|&v| vec![v]).collect();
        self.require_members(&gens)?;
        let frob = self.frobenius_number()?;
        let lo = *ideal.iter().min().expect("nonempty");
        let hi = ideal.iter().max().expect("nonempty").checked_add(frob + 1).ok_or(SemigroupError::Overflow)?;
        let p = i64::try_from(p).map_err(|_| SemigroupError::Overflow)?;
        let mut fte = 0;
        for x in lo..=hi {
            if !self.membership(&[x])? {
                continue;
            }
            let mut best: Option<u32> = None;
            for &v in ideal.iter().filter(|&&v| v <= x) {
                let mut q = 1i64;
                for e in 0..=e_cap.min(best.unwrap_or(u32::MAX)) {
                    if e > 0 {
                        q = q.checked_mul(p).ok_or(SemigroupError::Overflow)?;
                    }
                    let d = (x - v).checked_mul(q).ok_or(SemigroupError::Overflow)?;
                    if self.membership(&[d])? {
                        best = Some(best.map_or(e, |b| b.min(e)));
                        break;
                    }
                }
            }
            fte = fte.max(best.ok_or(SemigroupError::CapExceeded(e_cap))?);
        }
        if let Some(e0) = report.e0() {
            if fte > e0 {
                return Err(SemigroupError::FteAboveIndex { fte, e0 });
            }
        }
        Ok(fte)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pinched() -> AffineSemigroup {
        AffineSemigroup::new(3, vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 0, 2]]).unwrap()
    }

    fn veronese() -> AffineSemigroup {
        AffineSemigroup::new(3, vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]])
            .unwrap()
    }

    fn cusp() -> AffineSemigroup {
        AffineSemigroup::numerical(&[2, 3]).unwrap()
    }

    #[test]
    fn hilbert_basis_examples() {
        assert_eq!(cusp().saturation_hilbert_basis().unwrap(), vec![vec![1]]);
        assert_eq!(pinched().saturation_hilbert_basis().unwrap(), veronese().generators().to_vec());
        assert_eq!(veronese().saturation_hilbert_basis().unwrap(), veronese().generators().to_vec());
        let a = AffineSemigroup::new(2, vec![vec![1, 0], vec![1, 2]]).unwrap();
        assert_eq!(a.saturation_hilbert_basis().unwrap(), vec![vec![1, 0], vec![1, 2]]);
        let b = AffineSemigroup::new(2, vec![vec![2, 0], vec![3, 0], vec![0, 1]]).unwrap();
        assert_eq!(b.saturation_hilbert_basis().unwrap(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn small_box_is_doubled() {
        let a = AffineSemigroup::new(2, vec![vec![1, 0], vec![1, 2]]).unwrap().with_box_factor(1);
        assert_eq!(a.saturation().unwrap().box_bound, vec![2, 4]);
    }

    #[test]
    fn eventual_membership_examples() {
        assert_eq!(cusp().eventual_p_membership(&[1], 2, 12).unwrap(), EventualMembership::Yes { e: 1 });
        match pinched().eventual_p_membership(&[0, 1, 1], 3, 12).unwrap() {
            EventualMembership::No { certificate: Certificate::Torsion { face, face_generators, order } } => {
                assert_eq!(face, vec![vec![1, 0, 0]]);
                assert_eq!(face_generators, vec![vec![0, 2, 0], vec![0, 0, 2]]);
                assert_eq!(order, Some(2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(pinched().eventual_p_membership(&[0, 1, 1], 2, 12).unwrap(), EventualMembership::Yes { e: 1 });
        for g in pinched().generators() {
            assert_eq!(pinched().eventual_p_membership(g, 5, 12).unwrap(), EventualMembership::Yes { e: 0 });
        }
        assert_eq!(
            pinched().eventual_p_membership(&[1, 0, 0], 2, 12).unwrap(),
            EventualMembership::No { certificate: Certificate::OutsideSaturation }
        );
        assert!(matches!(cusp().eventual_p_membership(&[1], 4, 12), Err(SemigroupError::NotPrime(4))));
    }

    #[test]
    fn pure_insep_examples() {
        assert_eq!(pinched().pure_insep_index(2, 12).unwrap(), PureInseparability::Index { e0: 1 });
        assert!(matches!(
            pinched().pure_insep_index(3, 12).unwrap(),
            PureInseparability::NotPurelyInseparable { witness, .. } if witness == vec![0, 1, 1]
        ));
        assert_eq!(veronese().pure_insep_index(7, 12).unwrap(), PureInseparability::Index { e0: 0 });
    }

    #[test]
    fn weak_normalization_examples() {
        assert_eq!(cusp().weak_normalization(2, 12).unwrap().generators, vec![vec![1]]);
        assert_eq!(pinched().weak_normalization(2, 12).unwrap().generators, veronese().generators().to_vec());
        let mut expected = pinched().generators().to_vec();
        expected.sort_by(by_degree);
        let got = pinched().weak_normalization(3, 12).unwrap();
        assert_eq!(got.generators, expected);
        assert!(got.undetermined.is_empty());
    }

    #[test]
    fn f_nilpotency_examples() {
        assert_eq!(cusp().is_f_nilpotent(5, 12).unwrap().verdict, FVerdict::FNilpotent { e0: 1 });
        assert_eq!(pinched().is_f_nilpotent(2, 12).unwrap().verdict, FVerdict::FNilpotent { e0: 1 });
        assert!(matches!(
            pinched().is_f_nilpotent(7, 12).unwrap().verdict,
            FVerdict::NotFNilpotent { witness, .. } if witness == vec![0, 1, 1]
        ));
    }

    #[test]
    fn tight_closure_examples() {
        let a = cusp();
        let rep = a.is_f_nilpotent(2, 12).unwrap();
        assert!(a.tight_closure_membership_monomial(2, &[vec![3]], &[4], &rep).unwrap());
        assert!(!a.tight_closure_membership_monomial(2, &[vec![3]], &[2], &rep).unwrap());
        assert!(a.tight_closure_membership_monomial(2, &[vec![3]], &[3], &rep).unwrap());
        let bad = pinched().is_f_nilpotent(3, 12).unwrap();
        assert_eq!(
            pinched().tight_closure_membership_monomial(3, &[vec![2, 0, 0]], &[2, 0, 0], &bad),
            Err(SemigroupError::NotFNilpotentRing)
        );
        assert!(matches!(
            a.tight_closure_membership_monomial(2, &[vec![3]], &[1], &rep),
            Err(SemigroupError::NotInSemigroup(_))
        ));
    }

    #[test]
    fn fte_examples() {
        let a = cusp();
        let rep = a.is_f_nilpotent(2, 12).unwrap();
        assert_eq!(a.fte_bruteforce(2, &[3], 12, &rep).unwrap(), 1);
        let line = AffineSemigroup::numerical(&[1]).unwrap();
        let rep = line.is_f_nilpotent(3, 12).unwrap();
        assert_eq!(line.fte_bruteforce(3, &[2], 12, &rep).unwrap(), 0);
        assert_eq!(pinched().fte_bruteforce(2, &[2], 12, &rep), Err(SemigroupError::NotNumerical));
    }
}
