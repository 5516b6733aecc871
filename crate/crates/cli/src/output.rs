use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gmix::gaussmix::GaussianMixture;

use crate::CliError;

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("artifact");
    let tmp: PathBuf = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(contents.as_bytes()).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn io_err(p: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", p.display()))
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

/// `[{weight, l_matrix: [a, b, c, d], center: [x, y]}, ...]`
pub fn mixture_json(m: &GaussianMixture) -> String {
    let mut s = String::from("[");
    for (i, t) in m.terms.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let l = t.map;
        let _ = write!(
            s,
            "\n  {{\"weight\": {}, \"l_matrix\": [{}, {}, {}, {}], \"center\": [{}, {}]}}",
            num(t.weight),
            num(l[0][0]),
            num(l[0][1]),
            num(l[1][0]),
            num(l[1][1]),
            num(t.center[0]),
            num(t.center[1])
        );
    }
    s.push_str("\n]\n");
    s
}
