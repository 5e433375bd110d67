use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

pub const LOCK_FILE: &str = "LOCK";

/// Exclusive writer lock on a corpus directory, released on drop. A lock left
/// by a crashed process must be removed by hand.
#[derive(Debug)]
pub struct CorpusLock {
    path: PathBuf,
}

impl CorpusLock {
    pub fn acquire(corpus: &Path) -> Result<Self> {
        fs::create_dir_all(corpus).with_context(|| format!("creating {}", corpus.display()))?;
        let path = corpus.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                writeln!(f, "{}", std::process::id())?;
                Ok(Self { path })
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                let holder = fs::read_to_string(&path).unwrap_or_default();
                bail!(
                    "corpus {} is locked by process {} (remove {} if that process is gone)",
                    corpus.display(),
                    holder.trim(),
                    path.display()
                )
            }
            Err(e) => Err(e).with_context(|| format!("creating {}", path.display())),
        }
    }
}

impl Drop for CorpusLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}
