//! Symplectic Pauli strings and complex-weighted sums of them.
//!
//! A [`PauliString`] on `n` qubits is stored as two bit masks plus a power of
//! `i`. Qubit `q` carries `X` when only the x-bit is set, `Z` when only the
//! z-bit is set, `Y` when both are set, and the identity otherwise. The
//! operator is `i^phase` times the tensor product of those single-site
//! matrices, so a string with `phase == 0` is Hermitian.

use crate::error::{Error, Result};
use crate::scalar::{cabs, i_pow, Real};
use nalgebra::DMatrix;
use num_complex::Complex;
use std::collections::BTreeMap;
use std::fmt;

/// Largest qubit count representable by the 64-bit masks.
pub const MAX_PAULI_QUBITS: usize = 64;

/// Coefficients with modulus below this are dropped from a [`PauliSum`].
pub const PRUNE_TOL: f64 = 1e-12;

/// Single-site Pauli matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An `n`-qubit Pauli operator `i^phase · σ_0 ⊗ … ⊗ σ_{n-1}`.
///
/// The derived ordering compares `(n, x_mask, z_mask, phase)`; it is the
/// canonical order used wherever ties between strings must be broken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PAULI_QUBITS {
        return Err(Error::QubitCount { n, max: MAX_PAULI_QUBITS });
    }
    Ok(())
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { n, x: 0, z: 0, phase: 0 }
    }

    /// Builds a string from raw masks; bits at positions `>= n` are rejected.
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64, phase: u8) -> Result<Self> {
        check_n(n)?;
        if (x_mask | z_mask) & !mask(n) != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask bits beyond qubit count {n}: x={x_mask:#x} z={z_mask:#x}"
            )));
        }
        Ok(PauliString { n, x: x_mask, z: z_mask, phase: phase % 4 })
    }

    /// Builds a phase-free string from `(qubit, Pauli)` sites.
    pub fn from_sites(n: usize, sites: &[(usize, Pauli)]) -> Result<Self> {
        check_n(n)?;
        let mut s = PauliString::identity(n);
        for &(q, p) in sites {
            if q >= n {
                return Err(Error::InvalidArgument(format!("qubit {q} out of range for n={n}")));
            }
            s.set(q, p);
        }
        Ok(s)
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        Self::from_sites(n, &[(q, p)])
    }

    /// The flip-symmetry operator `F = X_0 X_1 … X_{n-1}`.
    pub fn all_x(n: usize) -> Self {
        PauliString { n, x: mask(n), z: 0, phase: 0 }
    }

    /// Parses a site-indexed label such as `"Y0Z3"`; `"I"` is the identity.
    pub fn parse(label: &str, n: usize) -> Result<Self> {
        check_n(n)?;
        let bad = || Error::InvalidLabel(label.to_string());
        if label == "I" {
            return Ok(Self::identity(n));
        }
        let mut s = Self::identity(n);
        let mut chars = label.chars().peekable();
        if chars.peek().is_none() {
            return Err(bad());
        }
        while let Some(c) = chars.next() {
            let p = match c {
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(bad()),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q: usize = digits.parse().map_err(|_| bad())?;
            if q >= n || s.get(q) != Pauli::I {
                return Err(bad());
            }
            s.set(q, p);
        }
        Ok(s)
    }

    fn set(&mut self, q: usize, p: Pauli) {
        let (xb, zb) = p.bits();
        let bit = 1u64 << q;
        self.x = if xb { self.x | bit } else { self.x & !bit };
        self.z = if zb { self.z | bit } else { self.z & !bit };
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Exponent `k` of the prefactor `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Same masks with the prefactor dropped.
    pub fn phaseless(&self) -> Self {
        PauliString { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        PauliString { phase: phase % 4, ..*self }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn z_count(&self) -> u32 {
        (self.z & !self.x).count_ones()
    }

    /// Non-identity sites in ascending qubit order.
    pub fn sites(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        (0..self.n).map(|q| (q, self.get(q))).filter(|(_, p)| *p != Pauli::I)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Symplectic commutation test.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Group product `self · other` including the accumulated power of `i`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.multiply_unchecked(other))
    }

    pub(crate) fn multiply_unchecked(&self, other: &Self) -> Self {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // σ(x,z) = i^{x·z} X^x Z^z and Z^a X^b = (-1)^{a·b} X^b Z^a.
        let k = self.phase as u32
            + other.phase as u32
            + (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        PauliString { n: self.n, x, z, phase: (k % 4) as u8 }
    }

    /// `true` iff the string commutes with `F = ⊗X`, i.e. it has an even
    /// number of `Y` or `Z` sites.
    pub fn commutes_with_flip(&self) -> bool {
        self.z.count_ones() % 2 == 0
    }

    /// Action on a computational basis state: `P|b⟩ = i^k |b'⟩`. Returns `(b', k)`.
    #[inline]
    pub fn apply_to_basis(&self, b: usize) -> (usize, u32) {
        let b64 = b as u64;
        let k = self.phase as u32 + (self.x & self.z).count_ones() + 2 * (self.z & b64).count_ones();
        ((b64 ^ self.x) as usize, k % 4)
    }

    /// Site-indexed label without the phase prefix, e.g. `"Y0Z3"`.
    pub fn label(&self) -> String {
        if self.is_identity() {
            return "I".to_string();
        }
        self.sites().map(|(q, p)| format!("{}{}", p.symbol(), q)).collect()
    }

    /// Dense `2^n × 2^n` matrix (qubit 0 is the least-significant index bit).
    pub fn to_dense<T: Real>(&self) -> DMatrix<Complex<T>> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
        for b in 0..dim {
            let (b2, k) = self.apply_to_basis(b);
            m[(b2, b)] = i_pow(k);
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.label())
    }
}

/// Free-function form of [`PauliString::multiply`].
pub fn multiply(p: &PauliString, q: &PauliString) -> Result<PauliString> {
    p.multiply(q)
}

/// `[p, q]` as a sum: zero when the strings commute, `2·p·q` otherwise.
pub fn commutator<T: Real>(p: &PauliString, q: &PauliString) -> Result<PauliSum<T>> {
    let mut out = PauliSum::zero(p.n);
    if !p.commutes(q)? {
        out.add_term(&p.multiply_unchecked(q), Complex::new(T::lit(2.0), T::zero()));
    }
    Ok(out)
}

pub fn commutes_with_flip(p: &PauliString) -> bool {
    p.commutes_with_flip()
}

/// Normalized trace inner product `Tr(a† b) / 2^n` (real part).
pub fn trace_inner<T: Real>(a: &PauliSum<T>, b: &PauliSum<T>) -> Result<T> {
    a.trace_inner(b)
}

/// `[h, [h, … [h, g]]]` with `depth` nested commutators.
pub fn nested_commutator_sum<T: Real>(h: &PauliSum<T>, g: &PauliSum<T>, depth: usize) -> Result<PauliSum<T>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("nesting depth must be at least 1".into()));
    }
    let mut acc = h.commutator(g)?;
    for _ in 1..depth {
        acc = h.commutator(&acc)?;
    }
    Ok(acc)
}

/// A complex-weighted sum of phase-free Pauli strings.
///
/// Phases of inserted strings are folded into the coefficients, so each key
/// is stored with `phase == 0` and iteration follows the canonical string
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum<T> {
    n: usize,
    terms: BTreeMap<PauliString, Complex<T>>,
}

impl<T: Real> PauliSum<T> {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn from_string(p: &PauliString, coeff: T) -> Self {
        let mut s = Self::zero(p.n);
        s.add_term(p, Complex::new(coeff, T::zero()));
        s
    }

    /// Real-weighted sum; strings must share a qubit count.
    pub fn from_terms<'a>(n: usize, terms: impl IntoIterator<Item = (&'a PauliString, T)>) -> Result<Self> {
        let mut s = Self::zero(n);
        for (p, c) in terms {
            if p.n != n {
                return Err(Error::SizeMismatch(n, p.n));
            }
            s.add_term(p, Complex::new(c, T::zero()));
        }
        Ok(s)
    }

    /// `Σ_q X_q`
    pub fn sum_x(n: usize) -> Self {
        Self::collective(n, Pauli::X)
    }

    /// `Σ_q P_q` for a single-site Pauli `P`.
    pub fn collective(n: usize, p: Pauli) -> Self {
        let mut s = Self::zero(n);
        for q in 0..n {
            let mut ps = PauliString::identity(n);
            ps.set(q, p);
            s.add_term(&ps, Complex::new(T::one(), T::zero()));
        }
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex<T>)> {
        self.terms.iter()
    }

    /// Coefficient of the phase-free string `p` (zero when absent).
    pub fn coefficient(&self, p: &PauliString) -> Complex<T> {
        self.terms.get(&p.phaseless()).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Adds `coeff · p`, folding the phase of `p` into the coefficient.
    /// Terms whose coefficient cancels below the pruning tolerance are removed.
    pub fn add_term(&mut self, p: &PauliString, coeff: Complex<T>) {
        let key = p.phaseless();
        let c = coeff * i_pow::<T>(p.phase as u32);
        let tol = T::lit(PRUNE_TOL);
        let entry = self.terms.entry(key).or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *entry += c;
        if cabs(*entry) < tol {
            self.terms.remove(&key);
        }
    }

    fn add_raw(&mut self, key: PauliString, c: Complex<T>) {
        let entry = self.terms.entry(key).or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *entry += c;
    }

    /// Drops every term whose coefficient modulus is below `tol`.
    pub fn prune(&mut self, tol: T) {
        self.terms.retain(|_, c| cabs(*c) >= tol);
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let mut out = Self::zero(self.n);
        for (k, c) in &self.terms {
            out.add_raw(*k, *c * factor);
        }
        out.prune(T::lit(PRUNE_TOL));
        out
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    /// `self + factor · other`
    pub fn add_scaled(&self, other: &Self, factor: Complex<T>) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_raw(*k, *c * factor);
        }
        out.prune(T::lit(PRUNE_TOL));
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex::new(T::one(), T::zero()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex::new(-T::one(), T::zero()))
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let r = p.multiply_unchecked(q);
                out.add_raw(r.phaseless(), *a * *b * i_pow::<T>(r.phase as u32));
            }
        }
        out.prune(T::lit(PRUNE_TOL));
        Ok(out)
    }

    /// `[self, other]`; only anticommuting pairs contribute `2·a·b·(p·q)`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let two = T::lit(2.0);
        let mut out = Self::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if p.commutes_unchecked(q) {
                    continue;
                }
                let r = p.multiply_unchecked(q);
                out.add_raw(r.phaseless(), (*a * *b).scale(two) * i_pow::<T>(r.phase as u32));
            }
        }
        out.prune(T::lit(PRUNE_TOL));
        Ok(out)
    }

    /// Complex `Tr(self† other) / 2^n`.
    pub fn trace_inner_complex(&self, other: &Self) -> Result<Complex<T>> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let (small, large, conj_small) =
            if self.terms.len() <= other.terms.len() { (self, other, true) } else { (other, self, false) };
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, c) in &small.terms {
            if let Some(d) = large.terms.get(k) {
                acc += if conj_small { c.conj() * *d } else { d.conj() * *c };
            }
        }
        Ok(acc)
    }

    /// Real part of [`Self::trace_inner_complex`]; exact for Hermitian inputs.
    pub fn trace_inner(&self, other: &Self) -> Result<T> {
        let z = self.trace_inner_complex(other)?;
        debug_assert!(
            !(self.is_hermitian() && other.is_hermitian()) || z.im.abs() <= T::lit(1e-9) * (T::one() + z.re.abs()),
            "trace inner product of Hermitian sums must be real"
        );
        Ok(z.re)
    }

    /// Squared normalized Frobenius norm `Tr(A†A)/2^n`.
    pub fn norm_sqr(&self) -> T {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_hermitian(&self) -> bool {
        let tol = T::lit(1e-10);
        self.terms.values().all(|c| c.im.abs() <= tol * (T::one() + c.re.abs()))
    }

    /// `true` iff every pair of terms commutes.
    pub fn terms_commute(&self) -> bool {
        self.first_noncommuting_pair().is_none()
    }

    pub(crate) fn first_noncommuting_pair(&self) -> Option<(PauliString, PauliString)> {
        let keys: Vec<_> = self.terms.keys().collect();
        for (i, p) in keys.iter().enumerate() {
            for q in &keys[i + 1..] {
                if !p.commutes_unchecked(q) {
                    return Some((**p, **q));
                }
            }
        }
        None
    }

    /// Dense matrix representation.
    pub fn to_dense(&self) -> DMatrix<Complex<T>> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
        for (p, c) in &self.terms {
            for b in 0..dim {
                let (b2, k) = p.apply_to_basis(b);
                m[(b2, b)] += *c * i_pow::<T>(k);
            }
        }
        m
    }
}

impl<T: Real> fmt::Display for PauliSum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("({}{:+}i)·{}", c.re, c.im, p.label())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
