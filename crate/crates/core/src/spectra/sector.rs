use crate::error::{Error, Result};

/// Simultaneous eigenspace of `Z`-type parity checks: each constraint
/// `(mask, sign)` demands `prod_{q in mask} Z_q = sign`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSector {
    constraints: Vec<(usize, i8)>,
}

impl ZSector {
    pub fn new(constraints: Vec<(usize, i8)>) -> Self {
        ZSector { constraints }
    }

    pub fn constraints(&self) -> &[(usize, i8)] {
        &self.constraints
    }

    pub fn allows(&self, s: usize) -> bool {
        self.constraints.iter().all(|&(mask, sign)| {
            let odd = (mask & s).count_ones() % 2 == 1;
            odd == (sign < 0)
        })
    }
}

/// Orbits of the basis states under a group of `X`-type flips `s -> s ^ g`.
///
/// The generators are kept fully reduced with each pivot at the highest set
/// bit, so the canonical member of an orbit is the one with every pivot bit
/// cleared, and orbits are numbered by the remaining free bits.
#[derive(Clone, Debug)]
pub struct XOrbits {
    n: usize,
    pivots: Vec<(usize, usize)>,
    free_bits: Vec<usize>,
}

impl XOrbits {
    pub fn new(n: usize, generators: &[usize]) -> Result<Self> {
        if n >= usize::BITS as usize {
            return Err(Error::TooManyQubits(n));
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for &g in generators {
            if g >> n != 0 {
                return Err(Error::Invalid(format!("flip mask {g:#x} exceeds {n} qubits")));
            }
            let mut r = g;
            for &(bit, p) in &pivots {
                if (r >> bit) & 1 == 1 {
                    r ^= p;
                }
            }
            if r == 0 {
                continue;
            }
            let bit = usize::BITS as usize - 1 - r.leading_zeros() as usize;
            for (_, p) in pivots.iter_mut() {
                if (*p >> bit) & 1 == 1 {
                    *p ^= r;
                }
            }
            pivots.push((bit, r));
        }
        pivots.sort_unstable();
        let free_bits = (0..n).filter(|b| !pivots.iter().any(|(p, _)| p == b)).collect();
        Ok(XOrbits { n, pivots, free_bits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn n_classes(&self) -> usize {
        1 << self.free_bits.len()
    }

    pub fn canonical(&self, mut s: usize) -> usize {
        for &(bit, p) in &self.pivots {
            if (s >> bit) & 1 == 1 {
                s ^= p;
            }
        }
        s
    }

    pub fn class_of(&self, s: usize) -> usize {
        let c = self.canonical(s);
        self.free_bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (((c >> b) & 1) << i))
    }

    /// The canonical member of orbit `class`.
    pub fn representative(&self, class: usize) -> usize {
        self.free_bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (((class >> i) & 1) << b))
    }

    pub fn class_ids(&self) -> Vec<u32> {
        (0..1usize << self.n).map(|s| self.class_of(s) as u32).collect()
    }
}

/// Invariant subspace used to restrict an iterative solve.
#[derive(Clone, Debug)]
pub enum Sector {
    Z(ZSector),
    /// States invariant under every flip of the group (all flips act as `+1`).
    XSymmetric { orbits: XOrbits, class_ids: Vec<u32> },
}

impl Sector {
    pub fn x_symmetric(orbits: XOrbits) -> Self {
        let class_ids = orbits.class_ids();
        Sector::XSymmetric { orbits, class_ids }
    }

    /// Orthogonal projection onto the sector, in place.
    pub fn project(&self, v: &mut [f64]) {
        match self {
            Sector::Z(z) => {
                for (s, a) in v.iter_mut().enumerate() {
                    if !z.allows(s) {
                        *a = 0.0;
                    }
                }
            }
            Sector::XSymmetric { orbits, class_ids } => {
                let mut sums = vec![0.0; orbits.n_classes()];
                for (a, &c) in v.iter().zip(class_ids) {
                    sums[c as usize] += a;
                }
                let size = (1usize << orbits.rank()) as f64;
                for (a, &c) in v.iter_mut().zip(class_ids) {
                    *a = sums[c as usize] / size;
                }
            }
        }
    }

    pub fn dimension(&self, n: usize) -> usize {
        match self {
            Sector::Z(z) => (0..1usize << n).filter(|&s| z.allows(s)).count(),
            Sector::XSymmetric { orbits, .. } => orbits.n_classes(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbits_partition_states() {
        let orbits = XOrbits::new(5, &[0b00011, 0b00110, 0b00101]).unwrap();
        assert_eq!(orbits.rank(), 2);
        assert_eq!(orbits.n_classes(), 8);
        let mut seen = [0; 8];
        for s in 0..32 {
            let c = orbits.class_of(s);
            seen[c] += 1;
            assert_eq!(orbits.class_of(s ^ 0b00011), c);
            assert_eq!(orbits.class_of(s ^ 0b00110), c);
            assert_eq!(orbits.class_of(orbits.representative(c)), c);
        }
        assert!(seen.iter().all(|&k| k == 4));
    }

    #[test]
    fn projections_are_idempotent() {
        let v0: Vec<f64> = (0..16).map(|i| (i as f64).sin()).collect();
        for sector in [
            Sector::Z(ZSector::new(vec![(0b1010, -1)])),
            Sector::x_symmetric(XOrbits::new(4, &[0b1111]).unwrap()),
        ] {
            let mut v = v0.clone();
            sector.project(&mut v);
            let once = v.clone();
            sector.project(&mut v);
            assert_eq!(v, once);
        }
    }
}
