use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use std::time::{Duration, Instant};

use latentlab_core::datagen::{default_config, example_dataset};
use latentlab_core::datasets::{builtin_standins, to_csv_string, Dataset, DatasetDescriptor};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Builtin,
    Generator,
    Upload,
    Generated,
}

/// One row of `GET /datasets`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub kind: EntryKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub handle: Option<String>,
    #[serde(flatten)]
    pub descriptor: DatasetDescriptor,
}

struct Stored {
    kind: EntryKind,
    dataset: Arc<Dataset>,
    last_used: Instant,
}

/// Builtin stand-ins plus session datasets keyed by content hash. Session
/// entries expire after `ttl` without use.
pub struct Registry {
    builtins: Vec<Arc<Dataset>>,
    generator: DatasetDescriptor,
    session: RwLock<HashMap<String, Stored>>,
    ttl: Duration,
}

/// Content-derived handle, so identical data always maps to the same handle.
pub fn content_handle(ds: &Dataset) -> String {
    let mut hasher = Sha256::new();
    hasher.update(ds.name().as_bytes());
    hasher.update([0]);
    hasher.update(serde_json::to_vec(&ds.descriptor()).expect("descriptor serializes"));
    hasher.update([0]);
    hasher.update(to_csv_string(ds).as_bytes());
    let digest = hasher.finalize();
    format!("ds-{}", hex::encode(&digest[..12]))
}

impl Registry {
    pub fn new(ttl: Duration) -> Self {
        let generator = example_dataset(&default_config())
            .expect("default example config is valid")
            .descriptor();
        Registry {
            builtins: builtin_standins().into_iter().map(Arc::new).collect(),
            generator,
            session: RwLock::new(HashMap::new()),
            ttl,
        }
    }

    pub fn builtin(&self, name: &str) -> Option<Arc<Dataset>> {
        self.builtins.iter().find(|d| d.name() == name).cloned()
    }

    pub fn builtin_names(&self) -> Vec<&str> {
        self.builtins.iter().map(|d| d.name()).collect()
    }

    fn purge(&self, map: &mut HashMap<String, Stored>, now: Instant) {
        map.retain(|_, s| now.duration_since(s.last_used) <= self.ttl);
    }

    pub fn insert(&self, kind: EntryKind, ds: Dataset) -> (String, Arc<Dataset>) {
        let handle = content_handle(&ds);
        let now = Instant::now();
        let mut map = self.session.write().expect("registry lock");
        self.purge(&mut map, now);
        let stored = map.entry(handle.clone()).or_insert_with(|| Stored {
            kind,
            dataset: Arc::new(ds),
            last_used: now,
        });
        stored.last_used = now;
        (handle, stored.dataset.clone())
    }

    /// Looks up a session handle and refreshes its idle timer.
    pub fn resolve(&self, handle: &str) -> Option<Arc<Dataset>> {
        let now = Instant::now();
        let mut map = self.session.write().expect("registry lock");
        self.purge(&mut map, now);
        map.get_mut(handle).map(|s| {
            s.last_used = now;
            s.dataset.clone()
        })
    }

    /// Builtins, the generator entry, then uploads sorted by name and handle.
    pub fn list(&self) -> Vec<DatasetEntry> {
        let mut out: Vec<DatasetEntry> = self
            .builtins
            .iter()
            .map(|d| DatasetEntry {
                kind: EntryKind::Builtin,
                handle: None,
                descriptor: d.descriptor(),
            })
            .collect();
        out.push(DatasetEntry {
            kind: EntryKind::Generator,
            handle: None,
            descriptor: self.generator.clone(),
        });
        let mut map = self.session.write().expect("registry lock");
        self.purge(&mut map, Instant::now());
        let mut uploads: Vec<DatasetEntry> = map
            .iter()
            .filter(|(_, s)| s.kind == EntryKind::Upload)
            .map(|(h, s)| DatasetEntry {
                kind: EntryKind::Upload,
                handle: Some(h.clone()),
                descriptor: s.dataset.descriptor(),
            })
            .collect();
        uploads.sort_by(|a, b| (&a.descriptor.name, &a.handle).cmp(&(&b.descriptor.name, &b.handle)));
        out.extend(uploads);
        out
    }

    pub fn session_len(&self) -> usize {
        self.session.read().expect("registry lock").len()
    }
}
