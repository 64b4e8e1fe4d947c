use std::fmt::Display;
use std::path::Path;

use freqvqa::media::MediaError;
use freqvqa::metrics::MetricsError;
use freqvqa::prior::PriorError;
use freqvqa::predictor::ModelError;
use freqvqa::tensor::TensorError;
use freqvqa::Error;

pub const EXIT_FORMAT: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Diagnostic plus process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FORMAT,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: impl Display) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }

    /// Attaches the offending file to a tensor or model error.
    pub fn at(path: &Path, err: impl Into<Error>) -> Self {
        let err = err.into();
        let code = classify(&err);
        Failure {
            code,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure {
            code: classify(&err),
            message: err.to_string(),
        }
    }
}

macro_rules! via_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(err: $t) -> Self {
                Error::from(err).into()
            }
        }
    )*};
}

via_error!(MediaError, PriorError, MetricsError);

fn classify(err: &Error) -> u8 {
    let io = match err {
        Error::Media(e) => e.is_io(),
        Error::Tensor(TensorError::Io(_)) | Error::Model(ModelError::Tensor(TensorError::Io(_))) => true,
        _ => false,
    };
    if io {
        EXIT_IO
    } else {
        EXIT_FORMAT
    }
}

/// Fails with the I/O exit code unless `path` names an existing file.
pub fn require_file(path: &Path) -> Result<(), Failure> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::io(path, "no such file"))
    }
}
