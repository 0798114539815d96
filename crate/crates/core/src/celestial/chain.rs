use crate::chow::{ChowClass, ChowError, PushForwardMap};

/// Composable push-forwards from a resolving object down to a target.
#[derive(Clone, Debug, Default)]
pub struct ManifestationChain {
    maps: Vec<PushForwardMap>,
}

impl ManifestationChain {
    pub fn new(maps: Vec<PushForwardMap>) -> Result<ManifestationChain, ChowError> {
        for w in maps.windows(2) {
            if !w[0].target().same_as(w[1].source()) {
                return Err(ChowError::RingMismatch(format!(
                    "chain breaks between {} and {}",
                    w[0].target().label(),
                    w[1].source().label()
                )));
            }
        }
        Ok(ManifestationChain { maps })
    }

    pub fn identity() -> ManifestationChain {
        ManifestationChain::default()
    }

    pub fn maps(&self) -> &[PushForwardMap] {
        &self.maps
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Pull-back through the whole chain (target to source).
    pub fn pull_back(&self, c: &ChowClass) -> Result<ChowClass, ChowError> {
        self.maps.iter().rev().try_fold(c.clone(), |acc, m| m.pull_back(&acc))
    }
}

/// Push-forward of `c` along every map of the chain in order.
pub fn manifest(c: &ChowClass, chain: &ManifestationChain) -> Result<ChowClass, ChowError> {
    chain.maps.iter().try_fold(c.clone(), |acc, m| m.push_forward(&acc))
}
