use std::fmt;

use super::eigen::SigmaData;
use super::lattice::{IntegralClass, LatticeMap};
use super::model::CYModel;
use super::ConeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    Sigma,
    SigmaInv,
    Tau1,
    Tau2,
}

impl Gen {
    pub fn inverse(self) -> Gen {
        match self {
            Gen::Sigma => Gen::SigmaInv,
            Gen::SigmaInv => Gen::Sigma,
            g => g,
        }
    }

    pub fn matrix<'a>(self, model: &'a CYModel, s: &'a SigmaData) -> Result<&'a LatticeMap, ConeError> {
        match self {
            Gen::Sigma => Ok(&s.sigma),
            Gen::SigmaInv => Ok(&s.sigma_inv),
            Gen::Tau1 => model.tau1().ok_or(ConeError::NoInvolutions),
            Gen::Tau2 => model.tau2().ok_or(ConeError::NoInvolutions),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::Sigma => "sigma",
            Gen::SigmaInv => "sigma^-1",
            Gen::Tau1 => "tau1",
            Gen::Tau2 => "tau2",
        })
    }
}

/// Sequence of pullbacks, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `sigma^k` as a word.
    pub fn sigma_power(k: i64) -> Self {
        let g = if k >= 0 { Gen::Sigma } else { Gen::SigmaInv };
        Word(vec![g; k.unsigned_abs() as usize])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends `other` and cancels adjacent inverse pairs.
    pub fn then(mut self, other: &Word) -> Word {
        for &g in &other.0 {
            match self.0.last() {
                Some(&last) if last == g.inverse() => {
                    self.0.pop();
                }
                _ => self.0.push(g),
            }
        }
        self
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    pub fn apply(
        &self,
        model: &CYModel,
        s: &SigmaData,
        d: &IntegralClass,
    ) -> Result<IntegralClass, ConeError> {
        let mut cur = d.clone();
        for g in &self.0 {
            cur = g.matrix(model, s)?.apply(&cur);
        }
        Ok(cur)
    }

    /// The composite matrix: `apply(D) == matrix().apply(D)`.
    pub fn matrix(&self, model: &CYModel, s: &SigmaData) -> Result<LatticeMap, ConeError> {
        let mut acc = LatticeMap::identity();
        for g in &self.0 {
            acc = g.matrix(model, s)? * &acc;
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    /// Runs of a repeated generator are written `g xN`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let g = self.0[i];
            let run = self.0[i..].iter().take_while(|&&h| h == g).count();
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{g} x{run}")?;
            } else {
                write!(f, "{g}")?;
            }
            i += run;
        }
        write!(f, "]")
    }
}
