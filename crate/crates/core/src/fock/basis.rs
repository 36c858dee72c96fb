/// Two-level atom state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Excited,
    Ground,
}

/// Truncated atom ⊗ Fock basis with photon numbers `0..=n_max`.
///
/// Flat layout is atom-major: all excited states first, then all ground
/// states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    n_max: usize,
}

impl BasisSpec {
    pub fn new(n_max: usize) -> Self {
        assert!(n_max >= 1, "photon cutoff must be at least 1");
        Self { n_max }
    }

    /// Smallest cutoff hosting a coherent state of mean photon number `mean`
    /// with a Poisson tail below 1e-12.
    pub fn required_cutoff(mean: f64) -> usize {
        (mean + 10.0 * mean.sqrt() + 20.0).ceil() as usize
    }

    pub fn for_mean_photons(mean: f64) -> Self {
        Self::new(Self::required_cutoff(mean))
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn index(&self, atom: Atom, n: usize) -> usize {
        debug_assert!(n <= self.n_max);
        match atom {
            Atom::Excited => n,
            Atom::Ground => self.n_max + 1 + n,
        }
    }

    pub fn state(&self, index: usize) -> (Atom, usize) {
        let block = self.n_max + 1;
        if index < block {
            (Atom::Excited, index)
        } else {
            (Atom::Ground, index - block)
        }
    }

    /// Excitation number `a†a + σ†σ` of a basis state; sector 0 is the dark
    /// state `|g,0>` and sector `n_max + 1` holds only `|e,n_max>`.
    pub fn sector(&self, index: usize) -> usize {
        match self.state(index) {
            (Atom::Excited, n) => n + 1,
            (Atom::Ground, n) => n,
        }
    }

    /// Sectors `1..n_max` are complete and untouched by ladder truncation.
    pub fn is_interior(&self, index: usize) -> bool {
        let k = self.sector(index);
        k >= 1 && k < self.n_max
    }

    pub fn dark_index(&self) -> usize {
        self.index(Atom::Ground, 0)
    }
}
