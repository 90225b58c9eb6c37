use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use mzi_core::io::Report;

use crate::error::{CliError, CliResult};

/// Where a command writes its artifacts.
pub struct OutDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::Data(format!("cannot create --out-dir {}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&mut self, name: &str, f: impl FnOnce(&mut dyn Write) -> mzi_core::Result<()>) -> CliResult<()> {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        f(&mut w)?;
        w.flush()?;
        self.written.push(path);
        Ok(())
    }

    /// `<stem>_report.txt` and `<stem>_report.csv`; the text is also printed.
    pub fn report(&mut self, stem: &str, report: &Report) -> CliResult<()> {
        self.write(&format!("{stem}_report.txt"), |w| report.write_text(w))?;
        self.write(&format!("{stem}_report.csv"), |w| report.write_csv(w))?;
        let mut text = Vec::new();
        report.write_text(&mut text)?;
        print!("{}", String::from_utf8_lossy(&text));
        Ok(())
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

pub fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}
