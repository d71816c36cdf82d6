//! Exact statevector simulation.
//!
//! Amplitudes are indexed by computational bitstring with qubit 0 as the
//! least-significant bit. Gates mutate the receiver in place.

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::scalar::{cis, i_pow, Real};
use num_complex::Complex;

/// Largest register the simulator accepts.
pub const MAX_STATE_QUBITS: usize = 24;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_STATE_QUBITS {
        return Err(Error::QubitCount { n, max: MAX_STATE_QUBITS });
    }
    Ok(())
}

/// Diagonal of a cost Hamiltonian in the computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CostDiagonal<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Real> CostDiagonal<T> {
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        check_n(n)?;
        if values.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "diagonal has {} entries, expected {}",
                values.len(),
                1usize << n
            )));
        }
        Ok(CostDiagonal { n, values })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::max_value().unwrap(), |a, b| a.min(b))
    }
}

/// A normalized `2^n`-amplitude pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|+⟩^{⊗n}`
    pub fn plus(n: usize) -> Result<Self> {
        check_n(n)?;
        let dim = 1usize << n;
        let a = T::one() / T::from_usize(dim).unwrap().sqrt();
        Ok(StateVector { n, amps: vec![Complex::new(a, T::zero()); dim] })
    }

    /// Computational basis state `|b⟩`.
    pub fn basis(n: usize, b: usize) -> Result<Self> {
        check_n(n)?;
        let dim = 1usize << n;
        if b >= dim {
            return Err(Error::InvalidArgument(format!("basis index {b} out of range for n={n}")));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[b] = Complex::new(T::one(), T::zero());
        Ok(StateVector { n, amps })
    }

    /// Normalizes the given amplitudes into a state.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        check_n(n)?;
        if amps.len() != 1 << n {
            return Err(Error::InvalidArgument(format!("expected {} amplitudes, got {}", 1usize << n, amps.len())));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::zero() || !norm.is_finite() {
            return Err(Error::InvalidArgument("amplitudes have zero or non-finite norm".into()));
        }
        Ok(StateVector { n, amps: amps.into_iter().map(|a| a.unscale(norm)).collect() })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check(other.n)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).fold(Complex::new(T::zero(), T::zero()), |s, v| s + v))
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::SizeMismatch(self.n, n));
        }
        Ok(())
    }

    /// `|ψ⟩ ← e^{-iγ H_C}|ψ⟩` for diagonal `H_C`.
    pub fn apply_cost_phase(&mut self, d: &CostDiagonal<T>, gamma: T) -> Result<()> {
        self.check(d.n)?;
        for (a, &e) in self.amps.iter_mut().zip(&d.values) {
            *a *= cis(-gamma * e);
        }
        Ok(())
    }

    /// `|ψ⟩ ← e^{-iβP}|ψ⟩` for a Hermitian Pauli string `P`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, beta: T) -> Result<()> {
        self.check(p.num_qubits())?;
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        self.rotate_string(p, beta);
        Ok(())
    }

    fn rotate_string(&mut self, p: &PauliString, beta: T) {
        let (c, s) = (beta.cos(), beta.sin());
        let x = p.x_mask() as usize;
        if x == 0 {
            // Diagonal string: each amplitude picks up e^{-iβ·(±1)}.
            for (b, a) in self.amps.iter_mut().enumerate() {
                let (_, k) = p.apply_to_basis(b);
                let sign = if k == 0 { T::one() } else { -T::one() };
                *a *= Complex::new(c, -s * sign);
            }
            return;
        }
        let minus_i_sin = Complex::new(T::zero(), -s);
        for b in 0..self.amps.len() {
            let partner = b ^ x;
            if partner < b {
                continue;
            }
            // P|b⟩ = i^k1 |partner⟩, P|partner⟩ = i^k2 |b⟩
            let (_, k1) = p.apply_to_basis(b);
            let (_, k2) = p.apply_to_basis(partner);
            let (ab, ap) = (self.amps[b], self.amps[partner]);
            self.amps[b] = ab.scale(c) + minus_i_sin * i_pow::<T>(k2) * ap;
            self.amps[partner] = ap.scale(c) + minus_i_sin * i_pow::<T>(k1) * ab;
        }
    }

    /// `|ψ⟩ ← e^{-iβA}|ψ⟩` for a Hermitian sum of mutually commuting strings.
    pub fn apply_pauli_sum_rotation(&mut self, a: &PauliSum<T>, beta: T) -> Result<()> {
        self.check(a.num_qubits())?;
        if let Some((p, q)) = a.first_noncommuting_pair() {
            return Err(Error::NonCommuting(p.label(), q.label()));
        }
        if !a.is_hermitian() {
            return Err(Error::NotHermitian(a.to_string()));
        }
        self.rotate_commuting_sum(a, beta);
        Ok(())
    }

    pub(crate) fn rotate_commuting_sum(&mut self, a: &PauliSum<T>, beta: T) {
        for (p, c) in a.iter() {
            self.rotate_string(p, beta * c.re);
        }
    }

    /// `⟨ψ|H_C|ψ⟩`
    pub fn expectation(&self, d: &CostDiagonal<T>) -> Result<T> {
        self.check(d.n)?;
        Ok(self.amps.iter().zip(&d.values).map(|(a, &e)| a.norm_sqr() * e).sum())
    }

    /// `⟨ψ|P|ψ⟩` for any Pauli string.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<Complex<T>> {
        self.check(p.num_qubits())?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (b, a) in self.amps.iter().enumerate() {
            let (b2, k) = p.apply_to_basis(b);
            acc += self.amps[b2].conj() * i_pow::<T>(k) * a;
        }
        Ok(acc)
    }

    /// Energy-gradient component `-i⟨ψ'|[H_C, A]|ψ'⟩` with `|ψ'⟩ = e^{-iγ₀H_C}|ψ⟩`.
    ///
    /// This is `dE/dβ` at `β = 0` for a layer `e^{-iβA}e^{-iγ₀H_C}` appended to
    /// the current state, evaluated as `2·Im⟨ψ'|H_C A|ψ'⟩`.
    pub fn gradient_component<G: Generator<T> + ?Sized>(&self, d: &CostDiagonal<T>, a: &G, gamma0: T) -> Result<T> {
        self.check(d.n)?;
        self.check(a.num_qubits())?;
        let mut shifted = self.clone();
        shifted.apply_cost_phase(d, gamma0)?;
        let mut applied = vec![Complex::new(T::zero(), T::zero()); self.amps.len()];
        a.apply(&shifted.amps, &mut applied);
        let mut acc = Complex::new(T::zero(), T::zero());
        for ((s, &e), v) in shifted.amps.iter().zip(&d.values).zip(&applied) {
            acc += s.conj() * v.scale(e);
        }
        Ok(acc.im * T::lit(2.0))
    }
}

/// Hermitian operator usable as a layer generator `e^{-iβA}`.
pub trait Generator<T: Real> {
    fn num_qubits(&self) -> usize;

    /// `out ← A·amps` (overwrites `out`).
    fn apply(&self, amps: &[Complex<T>], out: &mut [Complex<T>]);

    /// `state ← e^{-iβA} state`
    fn rotate(&self, state: &mut StateVector<T>, beta: T) -> Result<()>;
}

impl<T: Real> Generator<T> for PauliString {
    fn num_qubits(&self) -> usize {
        PauliString::num_qubits(self)
    }

    fn apply(&self, amps: &[Complex<T>], out: &mut [Complex<T>]) {
        for (b, a) in amps.iter().enumerate() {
            let (b2, k) = self.apply_to_basis(b);
            out[b2] = i_pow::<T>(k) * a;
        }
    }

    fn rotate(&self, state: &mut StateVector<T>, beta: T) -> Result<()> {
        state.apply_pauli_rotation(self, beta)
    }
}

impl<T: Real> Generator<T> for PauliSum<T> {
    fn num_qubits(&self) -> usize {
        PauliSum::num_qubits(self)
    }

    fn apply(&self, amps: &[Complex<T>], out: &mut [Complex<T>]) {
        out.iter_mut().for_each(|o| *o = Complex::new(T::zero(), T::zero()));
        for (p, c) in self.iter() {
            for (b, a) in amps.iter().enumerate() {
                let (b2, k) = p.apply_to_basis(b);
                out[b2] += *c * i_pow::<T>(k) * a;
            }
        }
    }

    fn rotate(&self, state: &mut StateVector<T>, beta: T) -> Result<()> {
        state.apply_pauli_sum_rotation(self, beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: Complex<f64>, b: Complex<f64>) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn plus_state_amplitudes() {
        let s = StateVector::<f64>::plus(1).unwrap();
        assert!(s.amplitudes().iter().all(|a| close(*a, c(0.5f64.sqrt(), 0.0))));
        let s = StateVector::<f64>::plus(2).unwrap();
        assert!(s.amplitudes().iter().all(|a| close(*a, c(0.5, 0.0))));
        let s = StateVector::<f64>::plus(6).unwrap();
        assert_eq!(s.amplitudes().len(), 64);
        assert!(s.amplitudes().iter().all(|a| close(*a, c(0.125, 0.0))));
        assert!(StateVector::<f64>::plus(0).is_err());
        assert!(StateVector::<f64>::plus(MAX_STATE_QUBITS + 1).is_err());
    }

    #[test]
    fn cost_phase_identities() {
        let d = CostDiagonal::new(2, vec![0.0, -1.0, -1.0, 0.0]).unwrap();
        let mut s = StateVector::<f64>::plus(2).unwrap();
        let orig = s.clone();
        s.apply_cost_phase(&d, 0.0).unwrap();
        assert_eq!(s, orig);
        let zero = CostDiagonal::new(2, vec![0.0; 4]).unwrap();
        s.apply_cost_phase(&zero, 1.234).unwrap();
        assert_eq!(s, orig);
        let mut b = StateVector::<f64>::basis(2, 0b01).unwrap();
        b.apply_cost_phase(&d, PI).unwrap();
        assert!(close(b.amplitudes()[1], c(-1.0, 0.0)));
    }

    #[test]
    fn pauli_rotation_examples() {
        let x0 = PauliString::parse("X0", 1).unwrap();
        let mut s = StateVector::<f64>::basis(1, 0).unwrap();
        s.apply_pauli_rotation(&x0, 0.0).unwrap();
        assert_eq!(s, StateVector::basis(1, 0).unwrap());
        s.apply_pauli_rotation(&x0, FRAC_PI_2).unwrap();
        assert!(close(s.amplitudes()[0], c(0.0, 0.0)));
        assert!(close(s.amplitudes()[1], c(0.0, -1.0)));

        let yy = PauliString::parse("Y0Y1", 2).unwrap();
        let mut s = StateVector::<f64>::basis(2, 0).unwrap();
        s.apply_pauli_rotation(&yy, 0.3).unwrap();
        assert!(close(s.amplitudes()[0], c(0.3f64.cos(), 0.0)));
        assert!(close(s.amplitudes()[3], c(0.0, 0.3f64.sin())));
    }

    #[test]
    fn non_hermitian_rotation_rejected() {
        let p = PauliString::parse("X0", 1).unwrap().with_phase(1);
        let mut s = StateVector::<f64>::plus(1).unwrap();
        assert!(matches!(s.apply_pauli_rotation(&p, 0.1), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn sum_rotation_examples() {
        let n = 4;
        let mut s = StateVector::<f64>::plus(n).unwrap();
        let orig = s.clone();
        s.apply_pauli_sum_rotation(&PauliSum::sum_x(n), 0.37).unwrap();
        let phase = cis(-(n as f64) * 0.37);
        for (a, b) in s.amplitudes().iter().zip(orig.amplitudes()) {
            assert!(close(*a, phase * b));
        }

        let p = PauliString::parse("Y0Z1", 2).unwrap();
        let mut a = StateVector::<f64>::plus(2).unwrap();
        let mut b = a.clone();
        a.apply_pauli_sum_rotation(&PauliSum::from_string(&p, 1.0), 0.7).unwrap();
        b.apply_pauli_rotation(&p, 0.7).unwrap();
        assert_eq!(a, b);

        let mut s = StateVector::<f64>::basis(2, 0).unwrap();
        s.apply_pauli_sum_rotation(&PauliSum::sum_x(2), FRAC_PI_2).unwrap();
        assert!(close(s.amplitudes()[3], c(-1.0, 0.0)));

        let mut bad = PauliSum::<f64>::sum_x(2);
        bad.add_term(&PauliString::parse("Z0", 2).unwrap(), c(1.0, 0.0));
        assert!(matches!(s.apply_pauli_sum_rotation(&bad, 0.1), Err(Error::NonCommuting(_, _))));
    }

    #[test]
    fn expectation_examples() {
        let d = CostDiagonal::new(2, vec![0.0, -0.7, -0.7, 0.0]).unwrap();
        let s = StateVector::<f64>::plus(2).unwrap();
        assert!((s.expectation(&d).unwrap() + 0.35).abs() < 1e-15);
        let b = StateVector::<f64>::basis(2, 2).unwrap();
        assert_eq!(b.expectation(&d).unwrap(), -0.7);
    }

    #[test]
    fn gradient_at_zero_gamma_on_plus() {
        let d = CostDiagonal::new(2, vec![0.0, -1.0, -1.0, 0.0]).unwrap();
        let s = StateVector::<f64>::plus(2).unwrap();
        for label in ["X0", "Y0Y1", "X0X1"] {
            let p = PauliString::parse(label, 2).unwrap();
            assert!(s.gradient_component(&d, &p, 0.0).unwrap().abs() < 1e-14);
        }
        // Strings with an odd number of Y sites are not stationary at γ₀ = 0:
        // E(β) = -½ - ½·sin 2β for Y0Z1 on a unit edge.
        let yz = PauliString::parse("Y0Z1", 2).unwrap();
        assert!((s.gradient_component(&d, &yz, 0.0).unwrap() + 1.0).abs() < 1e-14);
        let zy = PauliString::parse("Z0Y1", 2).unwrap();
        assert!((s.gradient_component(&d, &zy, 0.0).unwrap() + 1.0).abs() < 1e-14);
        let zz = PauliString::parse("Z0Z1", 2).unwrap();
        assert_eq!(s.gradient_component(&d, &zz, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn size_mismatches() {
        let d = CostDiagonal::new(3, vec![0.0; 8]).unwrap();
        let mut s = StateVector::<f64>::plus(2).unwrap();
        assert!(s.apply_cost_phase(&d, 0.1).is_err());
        assert!(s.expectation(&d).is_err());
        assert!(s.apply_pauli_rotation(&PauliString::identity(3), 0.1).is_err());
        assert!(CostDiagonal::<f64>::new(2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let mut s = StateVector::<f32>::plus(3).unwrap();
        let d = CostDiagonal::new(3, vec![0.0, -1.0, -0.5, -0.5, -0.5, -0.5, -1.0, 0.0]).unwrap();
        s.apply_cost_phase(&d, 0.4).unwrap();
        s.apply_pauli_rotation(&PauliString::parse("Y0Y2", 3).unwrap(), 0.2).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-6);
    }
}
