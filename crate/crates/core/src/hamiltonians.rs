//! Pauli strings and the periodic spin-chain targets (TFIM and XXZ).
//!
//! Qubits are numbered from 1; qubit 1 is the leftmost tensor factor and
//! the most significant bit of a basis index.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{DbiError, Result};
use crate::linalg::Operator;
use crate::scalar::Real;

/// Largest chain the dense constructors accept.
pub const MAX_QUBITS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

impl TryFrom<char> for Pauli {
    type Error = DbiError;
    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(DbiError::UnknownPauli(other)),
        }
    }
}

/// Tensor product of single-qubit Pauli operators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(DbiError::InvalidArgument("empty Pauli string".into()));
        }
        if letters.len() > MAX_QUBITS {
            return Err(DbiError::TooManyQubits { qubits: letters.len(), limit: MAX_QUBITS });
        }
        Ok(Self { letters })
    }

    /// Identity on `qubits` qubits with the given letters placed at 1-based
    /// positions.
    pub fn with_letters(qubits: usize, placed: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; qubits];
        for &(site, p) in placed {
            if site == 0 || site > qubits {
                return Err(DbiError::InvalidArgument(format!("qubit {site} outside 1..={qubits}")));
            }
            letters[site - 1] = p;
        }
        Self::new(letters)
    }

    pub fn qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Dense matrix in the computational basis.
    ///
    /// Every Pauli string is a signed, phased permutation: row `i` has its
    /// single nonzero entry in column `i ^ flip_mask`.
    pub fn to_operator<T: Real>(&self) -> Operator<T> {
        let mut out = Operator::zeros(1usize << self.letters.len()).expect("power of two");
        self.add_scaled_to(&mut out, T::one());
        out
    }

    /// `acc += coeff * P` without forming `P` densely.
    pub fn add_scaled_to<T: Real>(&self, acc: &mut Operator<T>, coeff: T) {
        let l = self.letters.len();
        let dim = 1usize << l;
        assert_eq!(acc.dim(), dim, "operator dimension must match the string");
        let mut flip_mask = 0usize;
        for (k, p) in self.letters.iter().enumerate() {
            if p.flips() {
                flip_mask |= 1 << (l - 1 - k);
            }
        }
        for row in 0..dim {
            let col = row ^ flip_mask;
            // <row| P |col> = prod_k <row_k| p_k |col_k>
            let mut value = Complex::new(coeff, T::zero());
            for (k, p) in self.letters.iter().enumerate() {
                let bit_row = (row >> (l - 1 - k)) & 1;
                let factor = match p {
                    Pauli::I | Pauli::X => Complex::new(T::one(), T::zero()),
                    // Y = [[0, -i], [i, 0]]
                    Pauli::Y if bit_row == 0 => Complex::new(T::zero(), -T::one()),
                    Pauli::Y => Complex::new(T::zero(), T::one()),
                    Pauli::Z if bit_row == 0 => Complex::new(T::one(), T::zero()),
                    Pauli::Z => Complex::new(-T::one(), T::zero()),
                };
                value = value * factor;
            }
            acc.set(row, col, acc.get(row, col) + value);
        }
    }
}

impl FromStr for PauliString {
    type Err = DbiError;
    fn from_str(s: &str) -> Result<Self> {
        let letters = s.chars().map(Pauli::try_from).collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Dense Pauli string on `qubits` qubits from letters such as `"XZI"`.
pub fn pauli_string<T: Real>(qubits: usize, letters: &str) -> Result<Operator<T>> {
    let parsed: PauliString = letters.parse()?;
    if parsed.qubits() != qubits {
        return Err(DbiError::BadLength { expected: qubits, got: parsed.qubits() });
    }
    Ok(parsed.to_operator())
}

fn check_chain(qubits: usize) -> Result<()> {
    if qubits < 2 {
        return Err(DbiError::InvalidArgument(format!("spin chain needs at least 2 qubits, got {qubits}")));
    }
    if qubits > MAX_QUBITS {
        return Err(DbiError::TooManyQubits { qubits, limit: MAX_QUBITS });
    }
    Ok(())
}

/// Periodic neighbour of 1-based site `j`.
fn next_site(j: usize, qubits: usize) -> usize {
    j % qubits + 1
}

fn accumulate<T: Real>(acc: &mut Operator<T>, term: &PauliString, coeff: T) {
    term.add_scaled_to(acc, coeff);
}

/// Transverse-field Ising chain with periodic boundaries,
/// `sum_j X_j X_{j+1} + h Z_j`.
///
/// At `L = 2` the periodic sum visits the single bond twice.
pub fn tfim<T: Real>(qubits: usize, h: T) -> Result<Operator<T>> {
    check_chain(qubits)?;
    let mut out = Operator::zeros(1 << qubits)?;
    for j in 1..=qubits {
        let k = next_site(j, qubits);
        accumulate(&mut out, &PauliString::with_letters(qubits, &[(j, Pauli::X), (k, Pauli::X)])?, T::one());
        accumulate(&mut out, &PauliString::with_letters(qubits, &[(j, Pauli::Z)])?, h);
    }
    Ok(out)
}

/// Heisenberg XXZ chain with periodic boundaries,
/// `sum_j X_j X_{j+1} + Y_j Y_{j+1} + delta Z_j Z_{j+1}`.
pub fn xxz<T: Real>(qubits: usize, delta: T) -> Result<Operator<T>> {
    check_chain(qubits)?;
    let mut out = Operator::zeros(1 << qubits)?;
    for j in 1..=qubits {
        let k = next_site(j, qubits);
        accumulate(&mut out, &PauliString::with_letters(qubits, &[(j, Pauli::X), (k, Pauli::X)])?, T::one());
        accumulate(&mut out, &PauliString::with_letters(qubits, &[(j, Pauli::Y), (k, Pauli::Y)])?, T::one());
        accumulate(&mut out, &PauliString::with_letters(qubits, &[(j, Pauli::Z), (k, Pauli::Z)])?, delta);
    }
    Ok(out)
}

/// Eigenvalue of `Z_site` (1-based) on basis state `index`.
#[inline]
pub fn z_eigenvalue(qubits: usize, site: usize, index: usize) -> i32 {
    if (index >> (qubits - site)) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Total magnetization `sum_j Z_j`.
pub fn magnetization<T: Real>(qubits: usize) -> Result<Operator<T>> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(DbiError::InvalidArgument(format!("bad qubit count {qubits}")));
    }
    let diag: Vec<T> = (0..1usize << qubits)
        .map(|i| T::of((1..=qubits).map(|j| z_eigenvalue(qubits, j, i)).sum::<i32>() as f64))
        .collect();
    Operator::from_diagonal(&diag)
}
