use super::StateError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhotonId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeId(pub usize);

/// Zero-based NV index; displayed one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NvId(pub usize);

impl std::fmt::Display for NvId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NV{}", self.0 + 1)
    }
}

/// Spatial-mode filter: which arms of a photon an element sits on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Modes {
    All,
    Only(Vec<ModeId>),
}

impl Modes {
    pub fn one(m: ModeId) -> Self {
        Modes::Only(vec![m])
    }

    pub fn contains(&self, m: usize) -> bool {
        match self {
            Modes::All => true,
            Modes::Only(v) => v.iter().any(|x| x.0 == m),
        }
    }

    /// Per-mode membership mask for a photon with `count` modes.
    pub(crate) fn mask(&self, photon: usize, count: usize) -> Result<Vec<bool>, StateError> {
        match self {
            Modes::All => Ok(vec![true; count]),
            Modes::Only(v) => {
                if v.is_empty() {
                    return Err(StateError::EmptyModes);
                }
                let mut mask = vec![false; count];
                for m in v {
                    if m.0 >= count {
                        return Err(StateError::InvalidMode { photon, mode: m.0 });
                    }
                    mask[m.0] = true;
                }
                Ok(mask)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhotonDecl {
    pub name: String,
    pub modes: Vec<String>,
}

/// Shape of the amplitude tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    photons: Vec<PhotonDecl>,
    spins: Vec<String>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Layout {
    pub fn new(photons: Vec<PhotonDecl>, spins: Vec<String>) -> Result<Self, StateError> {
        let mut dims = Vec::with_capacity(2 * photons.len() + spins.len());
        for p in &photons {
            if p.modes.is_empty() {
                return Err(StateError::Layout(format!(
                    "photon {} declares no spatial modes",
                    p.name
                )));
            }
            dims.push(2);
            dims.push(p.modes.len());
        }
        dims.extend(std::iter::repeat_n(2, spins.len()));
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let len = dims.iter().product();
        Ok(Layout {
            photons,
            spins,
            dims,
            strides,
            len,
        })
    }

    /// Photons `a(a1,a2)`, `b(b1,b2)`, `c(c1..c5)` and four NV spins.
    ///
    /// Photon `c` carries the beam-splitter arm `c3` and the polarizing side
    /// arms `c4` (paired with `c1`) and `c5` (paired with `c2`).
    pub fn canonical() -> Self {
        let photon = |name: &str, modes: &[&str]| PhotonDecl {
            name: name.to_string(),
            modes: modes.iter().map(|m| m.to_string()).collect(),
        };
        Layout::new(
            vec![
                photon("a", &["a1", "a2"]),
                photon("b", &["b1", "b2"]),
                photon("c", &["c1", "c2", "c3", "c4", "c5"]),
            ],
            (1..=4).map(|k| format!("nv{k}")).collect(),
        )
        .expect("canonical layout is valid")
    }

    pub fn photons(&self) -> &[PhotonDecl] {
        &self.photons
    }

    pub fn spins(&self) -> &[String] {
        &self.spins
    }

    pub fn photon_count(&self) -> usize {
        self.photons.len()
    }

    pub fn spin_count(&self) -> usize {
        self.spins.len()
    }

    pub fn mode_count(&self, p: PhotonId) -> usize {
        self.photons[p.0].modes.len()
    }

    /// Number of amplitudes.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn pol_axis(&self, p: PhotonId) -> usize {
        2 * p.0
    }

    pub fn spatial_axis(&self, p: PhotonId) -> usize {
        2 * p.0 + 1
    }

    pub fn spin_axis(&self, nv: NvId) -> usize {
        2 * self.photons.len() + nv.0
    }

    pub fn photon_by_name(&self, name: &str) -> Option<PhotonId> {
        self.photons
            .iter()
            .position(|p| p.name == name)
            .map(PhotonId)
    }

    pub fn mode_by_name(&self, p: PhotonId, name: &str) -> Option<ModeId> {
        self.photons[p.0]
            .modes
            .iter()
            .position(|m| m == name)
            .map(ModeId)
    }

    pub fn nv_by_name(&self, name: &str) -> Option<NvId> {
        self.spins.iter().position(|s| s == name).map(NvId)
    }

    pub fn check_photon(&self, p: PhotonId) -> Result<(), StateError> {
        if p.0 < self.photons.len() {
            Ok(())
        } else {
            Err(StateError::InvalidPhoton(p.0))
        }
    }

    pub fn check_mode(&self, p: PhotonId, m: ModeId) -> Result<(), StateError> {
        self.check_photon(p)?;
        if m.0 < self.mode_count(p) {
            Ok(())
        } else {
            Err(StateError::InvalidMode {
                photon: p.0,
                mode: m.0,
            })
        }
    }

    pub fn check_nv(&self, nv: NvId) -> Result<(), StateError> {
        if nv.0 < self.spins.len() {
            Ok(())
        } else {
            Err(StateError::InvalidNv(nv.0))
        }
    }

    /// Digit of flat index `i` along `axis`.
    #[inline]
    pub fn digit(&self, i: usize, axis: usize) -> usize {
        (i / self.strides[axis]) % self.dims[axis]
    }

    pub fn digits(&self, i: usize) -> Vec<usize> {
        (0..self.dims.len()).map(|a| self.digit(i, a)).collect()
    }

    pub fn flat(&self, digits: &[usize]) -> Option<usize> {
        if digits.len() != self.dims.len() {
            return None;
        }
        let mut i = 0;
        for ((d, dim), stride) in digits.iter().zip(&self.dims).zip(&self.strides) {
            if d >= dim {
                return None;
            }
            i += d * stride;
        }
        Some(i)
    }

    /// Layout with the same photons and no spins.
    pub fn photonic(&self) -> Layout {
        Layout::new(self.photons.clone(), Vec::new()).expect("photons already validated")
    }
}
