use std::fmt;

/// Photon occupation numbers, one entry per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    occupations: Vec<usize>,
}

impl FockState {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self { occupations }
    }

    /// `n` photons per listed mode, e.g. `FockState::from_slice(&[1, 1])`.
    pub fn from_slice(occupations: &[usize]) -> Self {
        Self::new(occupations.to_vec())
    }

    /// One photon in `mode` out of `modes`.
    pub fn single(modes: usize, mode: usize) -> Self {
        let mut occ = vec![0; modes];
        occ[mode] = 1;
        Self::new(occ)
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    pub fn total_photons(&self) -> usize {
        self.occupations.iter().sum()
    }

    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    /// Mode index of every photon, repeated by occupation: `|2,0,1>` gives
    /// `[0, 0, 2]`.
    pub fn mode_list(&self) -> Vec<usize> {
        self.occupations
            .iter()
            .enumerate()
            .flat_map(|(m, &n)| std::iter::repeat_n(m, n))
            .collect()
    }

    /// All states of `photons` photons in `modes` modes, in lexicographically
    /// descending order of occupations (`|2,0>, |1,1>, |0,2>`).
    pub fn all(modes: usize, photons: usize) -> Vec<FockState> {
        let mut out = Vec::new();
        let mut current = vec![0; modes];
        fill(&mut out, &mut current, 0, photons);
        out
    }
}

fn fill(out: &mut Vec<FockState>, current: &mut Vec<usize>, mode: usize, left: usize) {
    if mode + 1 == current.len() {
        current[mode] = left;
        out.push(FockState::new(current.clone()));
        return;
    }
    if current.is_empty() {
        return;
    }
    for n in (0..=left).rev() {
        current[mode] = n;
        fill(out, current, mode + 1, left - n);
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.occupations.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}
