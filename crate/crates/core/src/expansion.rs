use num_complex::Complex64;

/// One eigenstate contribution `c_n u_n e^{-i E_n t/ħ}` of a wavepacket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenTerm {
    pub quantum_number: i64,
    pub energy: f64,
    pub coefficient: Complex64,
}

/// A truncated eigenbasis expansion of a wavepacket.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EigenExpansion {
    terms: Vec<EigenTerm>,
}

impl EigenExpansion {
    pub fn new(terms: Vec<EigenTerm>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[EigenTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ|c_n|²`.
    pub fn norm_squared(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.norm_sqr()).sum()
    }

    /// Energy expectation `Σ|c_n|² E_n / Σ|c_n|²`.
    pub fn mean_energy(&self) -> f64 {
        let w: f64 = self
            .terms
            .iter()
            .map(|t| t.coefficient.norm_sqr() * t.energy)
            .sum();
        w / self.norm_squared()
    }

    /// `⟨ψ(0)|ψ(t)⟩ = Σ|c_n|² e^{-i E_n t/ħ}`, normalized by `Σ|c_n|²`.
    pub fn autocorrelation(&self, t: f64, hbar: f64) -> Complex64 {
        let s: Complex64 = self
            .terms
            .iter()
            .map(|term| Complex64::from_polar(term.coefficient.norm_sqr(), -term.energy * t / hbar))
            .sum();
        s / self.norm_squared()
    }

    /// Index of the term with the largest `|c_n|`.
    pub fn peak(&self) -> Option<&EigenTerm> {
        self.terms
            .iter()
            .max_by(|a, b| a.coefficient.norm().total_cmp(&b.coefficient.norm()))
    }
}
