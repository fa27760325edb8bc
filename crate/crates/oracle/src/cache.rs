//! On-disk cache of class data and character tables.
//!
//! Entries are canonical JSON keyed by `(group, n, q, eps)` and a format
//! version; all contained structures are vectors in deterministic order,
//! so cache files are byte-identical across platforms and runs.  The
//! cache only short-circuits recomputation - outputs never depend on it.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use slchar_core::GroupParams;

use crate::classes::ClassData;
use crate::error::{OracleError, OracleResult};
use crate::group::GroupKind;
use crate::table::CharacterTable;

pub const CACHE_VERSION: u32 = 1;

/// Environment variable consulted when no directory is given explicitly.
pub const CACHE_ENV: &str = "SLCHAR_CACHE_DIR";

#[derive(Debug, Clone, Default)]
pub struct OracleCache {
    pub dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    version: u32,
    order: u64,
    classes: ClassData,
    table: CharacterTable,
}

impl OracleCache {
    pub fn new(dir: Option<PathBuf>) -> OracleCache {
        let dir = dir.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        OracleCache { dir }
    }

    pub fn disabled() -> OracleCache {
        OracleCache { dir: None }
    }

    fn path(&self, params: &GroupParams, kind: GroupKind) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let kind_tag = match kind {
            GroupKind::Full => "full",
            GroupKind::Special => "special",
        };
        let eps_tag = if params.epsilon == 1 { "p" } else { "m" };
        Some(dir.join(format!(
            "v{CACHE_VERSION}_{kind_tag}_n{}_q{}_{eps_tag}.json",
            params.n, params.q
        )))
    }

    pub fn load(
        &self,
        params: &GroupParams,
        kind: GroupKind,
        order: u64,
    ) -> Option<(ClassData, CharacterTable)> {
        let path = self.path(params, kind)?;
        let bytes = std::fs::read(path).ok()?;
        let entry: CacheEntry = serde_json::from_slice(&bytes).ok()?;
        if entry.version != CACHE_VERSION || entry.order != order {
            return None;
        }
        Some((entry.classes, entry.table))
    }

    pub fn store(
        &self,
        params: &GroupParams,
        kind: GroupKind,
        order: u64,
        classes: &ClassData,
        table: &CharacterTable,
    ) -> OracleResult<()> {
        let Some(path) = self.path(params, kind) else {
            return Ok(());
        };
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)
                .map_err(|e| OracleError::Cache(format!("create {parent:?}: {e}")))?;
        }
        let entry = CacheEntry {
            version: CACHE_VERSION,
            order,
            classes: classes.clone(),
            table: table.clone(),
        };
        let bytes = serde_json::to_vec(&entry)
            .map_err(|e| OracleError::Cache(format!("serialize: {e}")))?;
        std::fs::write(&path, bytes)
            .map_err(|e| OracleError::Cache(format!("write {path:?}: {e}")))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::MatrixGroup;
    use crate::table::character_table;

    #[test]
    fn round_trip_is_byte_identical() {
        let tmp = std::env::temp_dir().join(format!("slchar-cache-test-{}", std::process::id()));
        let cache = OracleCache::new(Some(tmp.clone()));
        let params = GroupParams::new(2, 3, 1).unwrap();
        let g = MatrixGroup::build(&params, GroupKind::Special).unwrap();
        let c = ClassData::compute(&g).unwrap();
        let t = character_table(&g, &c).unwrap();
        cache.store(&params, GroupKind::Special, g.order(), &c, &t).unwrap();
        let path = cache.path(&params, GroupKind::Special).unwrap();
        let first = std::fs::read(&path).unwrap();
        cache.store(&params, GroupKind::Special, g.order(), &c, &t).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
        let (c2, t2) = cache.load(&params, GroupKind::Special, g.order()).unwrap();
        assert_eq!(c2.class_of, c.class_of);
        assert_eq!(t2.degrees, t.degrees);
        std::fs::remove_dir_all(tmp).ok();
    }
}
