//! Eigenvalue discovery inside `Q(i)`.
//!
//! The characteristic polynomial is formed exactly (Faddeev–LeVerrier) and
//! used only to find eigenvalues: all rational roots come out of the
//! rational-root theorem applied to the cleared-denominator integer
//! polynomial, the quotient is deflated, and a remaining linear or quadratic
//! factor is solved in closed form over `Q(i)`. Anything that still resists
//! (an irreducible factor of degree >= 3, or a quadratic whose roots leave
//! `Q(i)`) is reported as [`Error::RequiresEigenvalueHint`]; callers may then
//! pass the eigenvalues in as hints, which are verified individually.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num::traits::{One, Signed, Zero};
use num::{BigInt, Integer};

use crate::error::Error;
use crate::linalg::ExactMatrix;
use crate::scalar::{GaussianRational, Rational};

/// Dense polynomial over `Q(i)`, coefficients in ascending degree with a
/// nonzero trailing coefficient (the zero polynomial is empty).
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<GaussianRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(GaussianRational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![GaussianRational::one()],
        }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(GaussianRational::is_one)
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Horner evaluation with the matrix substituted for the variable.
    pub fn eval_matrix(&self, a: &ExactMatrix) -> ExactMatrix {
        assert!(a.is_square());
        let n = a.rows();
        let mut acc = ExactMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a).add(&ExactMatrix::scaled_identity(n, c));
        }
        acc
    }

    pub fn mul(&self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out =
            vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(out)
    }

    /// Multiplies by `(x - root)`.
    pub fn mul_linear(&self, root: &GaussianRational) -> Polynomial {
        self.mul(&Polynomial::new(vec![-root, GaussianRational::one()]))
    }

    /// Synthetic division by `(x - root)`: returns `(quotient, remainder)`.
    pub fn divide_by_linear(&self, root: &GaussianRational) -> (Polynomial, GaussianRational) {
        if self.is_zero() {
            return (Polynomial::zero(), GaussianRational::zero());
        }
        let n = self.coeffs.len();
        let mut quotient = vec![GaussianRational::zero(); n - 1];
        let mut carry = GaussianRational::zero();
        for k in (0..n).rev() {
            let value = &self.coeffs[k] + &(&carry * root);
            if k == 0 {
                return (Polynomial::new(quotient), value);
            }
            quotient[k - 1] = value.clone();
            carry = value;
        }
        unreachable!()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            // Real coefficients fold their sign into the separator; complex
            // ones are parenthesized.
            let (separator, coeff_text) = if c.is_real() {
                let negative = c.re().is_negative();
                let magnitude = if negative { -c } else { c.clone() };
                let sep = match (first, negative) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                let text = if k > 0 && magnitude.is_one() {
                    String::new()
                } else {
                    format!("{magnitude}")
                };
                (sep, text)
            } else {
                (if first { "" } else { " + " }, format!("({c})"))
            };
            first = false;
            match k {
                0 => write!(f, "{separator}{coeff_text}")?,
                1 => write!(f, "{separator}{coeff_text}x")?,
                _ => write!(f, "{separator}{coeff_text}x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Distinct eigenvalues with algebraic multiplicities, sorted by the
/// canonical scalar order. `complete` means the multiplicities account for
/// the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueReport {
    pub eigenvalues: Vec<(GaussianRational, usize)>,
    pub complete: bool,
}

impl EigenvalueReport {
    pub fn multiplicity_sum(&self) -> usize {
        self.eigenvalues.iter().map(|(_, m)| m).sum()
    }
}

/// Exact monic characteristic polynomial via the Faddeev–LeVerrier
/// recurrence.
pub fn char_poly(a: &ExactMatrix) -> Polynomial {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![GaussianRational::zero(); n + 1];
    coeffs[n] = GaussianRational::one();
    let mut m = ExactMatrix::identity(n);
    for k in 1..=n {
        let am = a.mul(&m);
        let c = (-am.trace())
            .checked_div(&GaussianRational::from_int(k as i64))
            .expect("k is nonzero");
        coeffs[n - k] = c.clone();
        if k < n {
            m = am.add(&ExactMatrix::scaled_identity(n, &c));
        }
    }
    Polynomial::new(coeffs)
}

/// Companion matrix of a monic polynomial of degree >= 1; its characteristic
/// polynomial is the input.
pub fn companion_matrix(p: &Polynomial) -> ExactMatrix {
    assert!(p.is_monic(), "companion matrix needs a monic polynomial");
    let n = p.degree().expect("nonzero polynomial");
    assert!(n >= 1);
    ExactMatrix::from_fn(n, n, |r, c| {
        if c + 1 == n {
            -&p.coeff(r)
        } else if r == c + 1 {
            GaussianRational::one()
        } else {
            GaussianRational::zero()
        }
    })
}

/// True iff `rank(A - lambda*I) < n`.
pub fn verify_eigenvalue(a: &ExactMatrix, lambda: &GaussianRational) -> bool {
    assert!(a.is_square());
    a.shifted(lambda).rank() < a.rows()
}

/// Finds the distinct eigenvalues of `a` inside `Q(i)`.
///
/// With hints, each hint is verified (`InvalidHint` otherwise) and its
/// multiplicity is read off the rank stabilization of powers of the shifted
/// operator; the built-in search is skipped entirely. Without hints the
/// characteristic polynomial is factored as far as rational-root deflation
/// plus exact linear/quadratic solving allows.
pub fn find_eigenvalues(
    a: &ExactMatrix,
    hints: Option<&[GaussianRational]>,
) -> Result<EigenvalueReport, Error> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return Ok(EigenvalueReport {
            eigenvalues: Vec::new(),
            complete: true,
        });
    }
    match hints {
        Some(hints) => {
            let unique: BTreeSet<GaussianRational> = hints.iter().cloned().collect();
            let mut eigenvalues = Vec::new();
            for lambda in unique {
                if !verify_eigenvalue(a, &lambda) {
                    return Err(Error::InvalidHint {
                        hint: lambda.to_string(),
                    });
                }
                let mult = multiplicity_by_stabilization(a, &lambda);
                eigenvalues.push((lambda, mult));
            }
            let complete = eigenvalues.iter().map(|(_, m)| m).sum::<usize>() == n;
            Ok(EigenvalueReport {
                eigenvalues,
                complete,
            })
        }
        None => search_eigenvalues(a),
    }
}

/// `dim X - dim R_a` for the eigenvalue: ranks of powers of the shifted
/// operator are computed until they stabilize.
pub fn multiplicity_by_stabilization(a: &ExactMatrix, lambda: &GaussianRational) -> usize {
    let n = a.rows();
    let m = a.shifted(lambda);
    let mut power = m.clone();
    let mut prev = n;
    loop {
        let r = power.rank();
        if r == prev {
            return n - r;
        }
        prev = r;
        power = power.mul(&m);
    }
}

fn search_eigenvalues(a: &ExactMatrix) -> Result<EigenvalueReport, Error> {
    let n = a.rows();
    let p = char_poly(a);
    let mut found: BTreeMap<GaussianRational, usize> = BTreeMap::new();
    let mut rem = p;

    // Zero roots first so the rational-root enumeration sees a nonzero
    // constant term.
    let zero = GaussianRational::zero();
    while rem.degree().is_some_and(|d| d >= 1) && rem.coeff(0).is_zero() {
        let (q, r) = rem.divide_by_linear(&zero);
        debug_assert!(r.is_zero());
        rem = q;
        *found.entry(zero.clone()).or_insert(0) += 1;
    }

    for candidate in rational_root_candidates(&rem) {
        let candidate = GaussianRational::from_rational(candidate);
        while rem.degree().is_some_and(|d| d >= 1) && rem.eval(&candidate).is_zero() {
            let (q, r) = rem.divide_by_linear(&candidate);
            debug_assert!(r.is_zero());
            rem = q;
            *found.entry(candidate.clone()).or_insert(0) += 1;
        }
    }

    match rem.degree().unwrap_or(0) {
        0 => {}
        1 => {
            // Monic x + c0, so the root is -c0 (necessarily non-rational
            // here, otherwise deflation would have caught it).
            let root = -&rem.coeff(0);
            *found.entry(root).or_insert(0) += 1;
        }
        2 => {
            let b = rem.coeff(1);
            let c = rem.coeff(0);
            let disc = &(&b * &b) - &(&GaussianRational::from_int(4) * &c);
            match gaussian_sqrt(&disc) {
                Some(s) => {
                    let half = GaussianRational::ratio(1, 2);
                    if s.is_zero() {
                        let root = &(-&b) * &half;
                        *found.entry(root).or_insert(0) += 2;
                    } else {
                        for root in [&(&(-&b) + &s) * &half, &(&(-&b) - &s) * &half] {
                            debug_assert!(rem.eval(&root).is_zero());
                            *found.entry(root).or_insert(0) += 1;
                        }
                    }
                }
                None => {
                    return Err(Error::RequiresEigenvalueHint {
                        detail: format!("quadratic factor {rem} has no roots in Q(i)"),
                    });
                }
            }
        }
        _ => {
            return Err(Error::RequiresEigenvalueHint {
                detail: format!("unfactored remainder {rem}"),
            });
        }
    }

    let eigenvalues: Vec<(GaussianRational, usize)> = found.into_iter().collect();
    let complete = eigenvalues.iter().map(|(_, m)| m).sum::<usize>() == n;
    debug_assert!(complete, "full deflation must account for the whole degree");
    Ok(EigenvalueReport {
        eigenvalues,
        complete,
    })
}

/// Candidate rational roots of the polynomial, smallest height first.
///
/// Candidates are read off the cleared-denominator primitive integer form of
/// the real-part polynomial (any rational root of the full polynomial is a
/// root of its real part, which is monic here).
fn rational_root_candidates(p: &Polynomial) -> Vec<Rational> {
    let Some(degree) = p.degree() else {
        return Vec::new();
    };
    if degree == 0 {
        return Vec::new();
    }

    // Real-part polynomial, with powers of x stripped so the constant term
    // is nonzero (nonzero rational roots survive the stripping).
    let mut real_coeffs: Vec<Rational> = p.coeffs().iter().map(|c| c.re().clone()).collect();
    let strip = real_coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("monic polynomial has a nonzero coefficient");
    real_coeffs.drain(..strip);
    if real_coeffs.len() < 2 {
        return Vec::new();
    }

    let lcm_den = real_coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = real_coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lcm_den.clone())).to_integer())
        .collect();
    let content = ints
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let ints: Vec<BigInt> = ints.iter().map(|v| v / &content).collect();

    let constant = ints.first().expect("nonempty").abs();
    let leading = ints.last().expect("nonempty").abs();
    let mut candidates: BTreeSet<Rational> = BTreeSet::new();
    for p_div in divisors(&constant) {
        for q_div in divisors(&leading) {
            let r = Rational::new(p_div.clone(), q_div.clone());
            candidates.insert(-r.clone());
            candidates.insert(r);
        }
    }
    let mut out: Vec<Rational> = candidates.into_iter().collect();
    out.sort_by(|a, b| {
        let ha = a.numer().abs().max(a.denom().clone());
        let hb = b.numer().abs().max(b.denom().clone());
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    out
}

/// Positive divisors of `|n|` (with `divisors(0) = [1]` as a harmless
/// degenerate case), via trial-division factorization.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.abs();
    if m.is_zero() {
        return vec![BigInt::one()];
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (prime, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for base in &divs {
            let mut power = BigInt::one();
            for _ in 0..=e {
                next.push(base * &power);
                power *= &prime;
            }
        }
        divs = next;
    }
    divs
}

/// Exact square root of a rational, if it is a perfect square.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

/// Exact square root inside `Q(i)`, when one exists.
///
/// For `d = p + qi`: a square root `u + vi` exists iff the norm `p^2 + q^2`
/// is a rational square `m^2` and `(p + m)/2` is a rational square. The real
/// case specializes to `d = s^2` (root `s`) or `d = -s^2` (root `si`).
pub fn gaussian_sqrt(d: &GaussianRational) -> Option<GaussianRational> {
    if d.is_zero() {
        return Some(GaussianRational::zero());
    }
    let p = d.re();
    let q = d.im();
    let result = if q.is_zero() {
        if p.is_negative() {
            rational_sqrt(&-p.clone())
                .map(|s| GaussianRational::new(Rational::zero(), s))
        } else {
            rational_sqrt(p).map(GaussianRational::from_rational)
        }
    } else {
        let norm = d.norm_sq();
        let m = rational_sqrt(&norm)?;
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let u_sq = (p + &m) * &half;
        let u = rational_sqrt(&u_sq)?;
        if u.is_zero() {
            return None;
        }
        let v = q * &half / &u;
        Some(GaussianRational::new(u, v))
    };
    if let Some(s) = &result {
        debug_assert_eq!(&(s * s), d, "square-root candidate must verify");
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> ExactMatrix {
        ExactMatrix::from_str_rows(rows).unwrap()
    }

    fn g(s: &str) -> GaussianRational {
        GaussianRational::parse(s).unwrap()
    }

    fn poly(coeffs: &[&str]) -> Polynomial {
        Polynomial::new(coeffs.iter().map(|s| g(s)).collect())
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&m(&[&["2"]])), poly(&["-2", "1"]));
        assert_eq!(
            char_poly(&m(&[&["3", "1"], &["0", "3"]])),
            poly(&["9", "-6", "1"])
        );
    }

    #[test]
    fn char_poly_of_companion_matrix_is_the_polynomial() {
        // x^3 + 2x - 5
        let p = poly(&["-5", "2", "0", "1"]);
        assert_eq!(char_poly(&companion_matrix(&p)), p);
    }

    #[test]
    fn find_eigenvalues_diagonal() {
        let report = find_eigenvalues(
            &m(&[&["2", "0", "0"], &["0", "2", "0"], &["0", "0", "5"]]),
            None,
        )
        .unwrap();
        assert!(report.complete);
        assert_eq!(report.eigenvalues, vec![(g("2"), 2), (g("5"), 1)]);
    }

    #[test]
    fn find_eigenvalues_rotation_gives_plus_minus_i() {
        let report = find_eigenvalues(&m(&[&["0", "-1"], &["1", "0"]]), None).unwrap();
        assert!(report.complete);
        assert_eq!(report.eigenvalues, vec![(g("-1i"), 1), (g("1i"), 1)]);
    }

    #[test]
    fn find_eigenvalues_cube_root_of_two_needs_hint() {
        // x^3 - 2 is irreducible and its roots are outside Q(i).
        let c = companion_matrix(&poly(&["-2", "0", "0", "1"]));
        match find_eigenvalues(&c, None) {
            Err(Error::RequiresEigenvalueHint { .. }) => {}
            other => panic!("expected hint error, got {other:?}"),
        }
    }

    #[test]
    fn hints_are_verified() {
        let a = m(&[&["2", "0"], &["0", "3"]]);
        let ok = find_eigenvalues(&a, Some(&[g("2"), g("3")])).unwrap();
        assert!(ok.complete);
        assert_eq!(ok.eigenvalues, vec![(g("2"), 1), (g("3"), 1)]);

        let incomplete = find_eigenvalues(&a, Some(&[g("2")])).unwrap();
        assert!(!incomplete.complete);

        match find_eigenvalues(&a, Some(&[g("4")])) {
            Err(Error::InvalidHint { hint }) => assert_eq!(hint, "4"),
            other => panic!("expected invalid hint, got {other:?}"),
        }
    }

    #[test]
    fn verify_eigenvalue_examples() {
        let a = m(&[&["2", "0"], &["0", "3"]]);
        assert!(verify_eigenvalue(&a, &g("2")));
        assert!(!verify_eigenvalue(&a, &g("4")));
        assert!(verify_eigenvalue(&m(&[&["0", "1"], &["0", "0"]]), &g("0")));
    }

    #[test]
    fn gaussian_sqrt_cases() {
        assert_eq!(gaussian_sqrt(&g("4")), Some(g("2")));
        assert_eq!(gaussian_sqrt(&g("-4")), Some(g("2i")));
        assert_eq!(gaussian_sqrt(&g("9/16")), Some(g("3/4")));
        // (1 - i)^2 = -2i
        assert_eq!(gaussian_sqrt(&g("0-2i")), Some(g("1-1i")));
        assert_eq!(gaussian_sqrt(&g("2")), None);
        assert_eq!(gaussian_sqrt(&g("1+1i")), None);
    }

    #[test]
    fn complex_coefficient_polynomials_still_factor() {
        // diag(i, 1, 2): char poly has complex coefficients; the rational
        // roots 1 and 2 deflate and the linear remainder yields i.
        let a = m(&[&["1i", "0", "0"], &["0", "1", "0"], &["0", "0", "2"]]);
        let report = find_eigenvalues(&a, None).unwrap();
        assert!(report.complete);
        assert_eq!(
            report.eigenvalues,
            vec![(g("1i"), 1), (g("1"), 1), (g("2"), 1)]
        );
    }

    #[test]
    fn complex_quadratic_with_gaussian_roots() {
        // diag(1+i, 1-i): char poly x^2 - 2x + 2, disc = -4, roots 1 +/- i.
        let a = m(&[&["1+1i", "0"], &["0", "1-1i"]]);
        let report = find_eigenvalues(&a, None).unwrap();
        assert!(report.complete);
        assert_eq!(report.eigenvalues, vec![(g("1-1i"), 1), (g("1+1i"), 1)]);
    }

    #[test]
    fn synthetic_division_by_linear_factor() {
        let p = poly(&["-5", "2", "0", "1"]);
        let (q, r) = p.divide_by_linear(&g("1"));
        assert_eq!(r, g("-2"));
        assert_eq!(q, poly(&["3", "1", "1"]));
        // Exact reconstruction: q*(x-1) + r = p.
        let back = Polynomial::new(
            q.mul_linear(&g("1"))
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| if k == 0 { c + &r } else { c.clone() })
                .collect(),
        );
        assert_eq!(back, p);
    }

    #[test]
    fn polynomial_display() {
        assert_eq!(poly(&["-2", "0", "0", "1"]).to_string(), "x^3 - 2");
        assert_eq!(poly(&["9", "-6", "1"]).to_string(), "x^2 - 6x + 9");
        assert_eq!(poly(&["1", "0", "1"]).to_string(), "x^2 + 1");
        assert_eq!(poly(&["1i", "1"]).to_string(), "x + (1i)");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(poly(&["-1/2"]).to_string(), "-1/2");
    }

    #[test]
    fn multiplicity_by_stabilization_matches_block_structure() {
        // One 2-block and one 1-block at 0, one 1-block at 3.
        let a = m(&[
            &["0", "1", "0", "0"],
            &["0", "0", "0", "0"],
            &["0", "0", "0", "0"],
            &["0", "0", "0", "3"],
        ]);
        assert_eq!(multiplicity_by_stabilization(&a, &g("0")), 3);
        assert_eq!(multiplicity_by_stabilization(&a, &g("3")), 1);
    }
}
