//! YUV4MPEG2 reader for the 8-bit 4:2:0, 4:4:4 and mono subsets.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{Colorspace, FrameSequence, MediaError, RawFrame};

const MAGIC: &[u8] = b"YUV4MPEG2";
const FRAME_MARKER: &[u8] = b"FRAME";
const MAX_HEADER_LEN: usize = 4096;

/// Reads and parses a `.y4m` file, streaming planes straight from disk.
pub fn read_y4m(path: impl AsRef<Path>) -> Result<FrameSequence, MediaError> {
    let path = path.as_ref();
    let io_err = |source| MediaError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    parse_stream(&mut BufReader::with_capacity(1 << 20, file)).map_err(|e| match e {
        StreamError::Media(m) => m,
        StreamError::Io(source) => io_err(source),
    })
}

/// Parses an in-memory YUV4MPEG2 stream.
pub fn parse_y4m(mut bytes: &[u8]) -> Result<FrameSequence, MediaError> {
    parse_stream(&mut bytes).map_err(|e| match e {
        StreamError::Media(m) => m,
        StreamError::Io(e) => unreachable!("reading a slice cannot fail: {e}"),
    })
}

enum StreamError {
    Media(MediaError),
    Io(io::Error),
}

impl From<MediaError> for StreamError {
    fn from(e: MediaError) -> Self {
        StreamError::Media(e)
    }
}

impl From<io::Error> for StreamError {
    fn from(e: io::Error) -> Self {
        StreamError::Io(e)
    }
}

enum Line {
    Complete(Vec<u8>),
    /// Input ended before a newline; holds the dangling bytes.
    Eof(Vec<u8>),
}

fn parse_stream<R: BufRead>(source: &mut R) -> Result<FrameSequence, StreamError> {
    let header = match take_line(source)? {
        Some(Line::Complete(line)) => line,
        _ => return Err(MediaError::Format("missing YUV4MPEG2 header line".into()).into()),
    };
    let mut tokens = header.split(|&b| b == b' ').filter(|t| !t.is_empty());
    if tokens.next() != Some(MAGIC) {
        return Err(MediaError::Format("missing YUV4MPEG2 signature".into()).into());
    }

    let mut width = None;
    let mut height = None;
    let mut colorspace = Colorspace::Yuv420;
    for token in tokens {
        let value = std::str::from_utf8(&token[1..])
            .map_err(|_| MediaError::Format("non-ASCII header tag".into()))?;
        match token[0] {
            b'W' => width = Some(parse_dim('W', value)?),
            b'H' => height = Some(parse_dim('H', value)?),
            b'C' => colorspace = parse_colorspace(value)?,
            // Frame rate, interlacing, aspect ratio and extensions do not
            // affect the payload layout.
            b'F' | b'I' | b'A' | b'X' => {}
            other => {
                return Err(MediaError::Format(format!(
                    "unknown header tag {:?}",
                    char::from(other)
                ))
                .into())
            }
        }
    }
    let width = width.ok_or_else(|| MediaError::Format("header lacks W tag".into()))?;
    let height = height.ok_or_else(|| MediaError::Format("header lacks H tag".into()))?;

    let frame_bytes = colorspace.frame_bytes(width, height);
    let sizes = colorspace.plane_sizes(width, height);
    let mut frames = Vec::new();
    loop {
        let index = frames.len();
        let line = match take_line(source)? {
            None => break,
            Some(Line::Complete(line)) => line,
            Some(Line::Eof(rest)) => {
                if FRAME_MARKER.starts_with(&rest) || rest.starts_with(FRAME_MARKER) {
                    return Err(MediaError::Truncated {
                        frame: index,
                        expected: frame_bytes,
                        found: 0,
                    }
                    .into());
                }
                return Err(MediaError::Format(format!("expected FRAME marker for frame {index}")).into());
            }
        };
        if !line.starts_with(FRAME_MARKER)
            || !(line.len() == FRAME_MARKER.len() || line[FRAME_MARKER.len()] == b' ')
        {
            return Err(MediaError::Format(format!("expected FRAME marker for frame {index}")).into());
        }
        let mut planes = Vec::with_capacity(sizes.len());
        let mut found = 0;
        for &size in &sizes {
            let mut plane = Vec::with_capacity(size);
            let got = source.by_ref().take(size as u64).read_to_end(&mut plane)?;
            found += got;
            if got < size {
                return Err(MediaError::Truncated {
                    frame: index,
                    expected: frame_bytes,
                    found,
                }
                .into());
            }
            planes.push(plane);
        }
        frames.push(RawFrame { planes });
    }
    if frames.is_empty() {
        return Err(MediaError::Format("stream contains no frames".into()).into());
    }
    Ok(FrameSequence::new(width, height, colorspace, frames)?)
}

/// Writes `seq` as YUV4MPEG2 at 30 fps. RGB sequences are rejected.
pub fn write_y4m<W: Write>(seq: &FrameSequence, mut sink: W) -> io::Result<()> {
    let tag = match seq.colorspace() {
        Colorspace::Yuv420 => "420jpeg",
        Colorspace::Yuv444 => "444",
        Colorspace::Mono => "mono",
        Colorspace::Rgb8 => {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "YUV4MPEG2 cannot carry interleaved RGB",
            ))
        }
    };
    writeln!(
        sink,
        "YUV4MPEG2 W{} H{} F30:1 Ip A1:1 C{}",
        seq.width(),
        seq.height(),
        tag
    )?;
    for frame in seq.frames() {
        sink.write_all(b"FRAME\n")?;
        for plane in &frame.planes {
            sink.write_all(plane)?;
        }
    }
    sink.flush()
}

/// Reads one line without its newline. `None` at a clean end of input.
fn take_line<R: BufRead>(source: &mut R) -> Result<Option<Line>, StreamError> {
    let mut line = Vec::new();
    let n = source.by_ref().take(MAX_HEADER_LEN as u64).read_until(b'\n', &mut line)?;
    if n == 0 {
        return Ok(None);
    }
    if line.last() == Some(&b'\n') {
        line.pop();
        return Ok(Some(Line::Complete(line)));
    }
    if n == MAX_HEADER_LEN {
        return Err(MediaError::Format(format!("line exceeds {MAX_HEADER_LEN} bytes")).into());
    }
    Ok(Some(Line::Eof(line)))
}

fn parse_dim(tag: char, value: &str) -> Result<usize, MediaError> {
    match value.parse::<usize>() {
        Ok(v) if v > 0 && v <= 1 << 16 => Ok(v),
        _ => Err(MediaError::Format(format!("bad {tag} tag {value:?}"))),
    }
}

fn parse_colorspace(value: &str) -> Result<Colorspace, MediaError> {
    match value {
        "420jpeg" | "420mpeg2" | "420" => Ok(Colorspace::Yuv420),
        "444" => Ok(Colorspace::Yuv444),
        "mono" => Ok(Colorspace::Mono),
        other => Err(MediaError::UnsupportedColorspace(other.to_string())),
    }
}
