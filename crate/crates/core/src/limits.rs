//! Size caps shared by the expensive operations.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest group order that gets enumerated.
    pub group_order: usize,
    /// Largest coset table built by coset enumeration.
    pub cosets: usize,
    /// Largest vertex count of a power complex.
    pub vertices: usize,
    /// Node budget of one backtracking search.
    pub search_nodes: u64,
    /// Largest number of flags enumerated per section when checking connectivity.
    pub flags: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            group_order: crate::perm::DEFAULT_GROUP_CAP,
            cosets: 1_000_000,
            vertices: 1 << 20,
            search_nodes: crate::morphism::DEFAULT_SEARCH_BUDGET,
            flags: crate::validate::DEFAULT_FLAG_CAP,
        }
    }
}
