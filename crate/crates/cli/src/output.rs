use std::io::Write;

/// Collects results as ordered key/value pairs.
#[derive(Default)]
pub struct Output {
    pairs: Vec<(String, String)>,
    prose: Vec<String>,
}

impl Output {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.pairs.push((key.to_string(), value.to_string()));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.prose.push(text.into());
    }

    pub fn print(&self, structured: bool) {
        let mut out = std::io::stdout().lock();
        if structured {
            for (k, v) in &self.pairs {
                let _ = writeln!(out, "{k}={v}");
            }
        } else {
            for l in &self.prose {
                let _ = writeln!(out, "{l}");
            }
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
pub fn emit(args: std::fmt::Arguments<'_>) {
    let _ = std::io::stdout().lock().write_fmt(args);
}

macro_rules! say {
    () => {
        $crate::output::emit(format_args!("\n"))
    };
    ($($t:tt)*) => {
        $crate::output::emit(format_args!("{}\n", format_args!($($t)*)))
    };
}

pub(crate) use say;
