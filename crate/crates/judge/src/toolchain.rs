use std::path::{Path, PathBuf};

use arena_core::LanguageId;

use crate::sandbox::{Cell, ProcLimits};
use crate::RunLimits;

const MIB: u64 = 1 << 20;

/// Host compilers and interpreters. Jailed programs only see `/usr` and the
/// usual `/bin`, `/lib` links, so tools must live there.
#[derive(Debug, Clone, Default)]
pub struct Toolchain {
    pub cpp: Option<PathBuf>,
    pub javac: Option<PathBuf>,
    pub java: Option<PathBuf>,
    pub python: Option<PathBuf>,
}

impl Toolchain {
    pub fn detect() -> Self {
        Toolchain {
            cpp: find("g++"),
            javac: find("javac"),
            java: find("java"),
            python: find("python3"),
        }
    }

    pub fn supports(&self, language: LanguageId) -> bool {
        self.plan(language).is_some()
    }

    pub(crate) fn plan(&self, language: LanguageId) -> Option<Plan<'_>> {
        let available = match language {
            LanguageId::Cpp17 => self.cpp.is_some(),
            LanguageId::Java => self.javac.is_some() && self.java.is_some(),
            LanguageId::Python3 => self.python.is_some(),
        };
        available.then_some(Plan {
            toolchain: self,
            language,
        })
    }
}

fn find(name: &str) -> Option<PathBuf> {
    ["/usr/bin", "/bin"]
        .iter()
        .map(|dir| Path::new(dir).join(name))
        .find(|p| p.is_file())
}

pub(crate) struct Plan<'a> {
    toolchain: &'a Toolchain,
    language: LanguageId,
}

impl Plan<'_> {
    pub(crate) fn source_file(&self) -> &'static str {
        match self.language {
            LanguageId::Cpp17 => "main.cpp",
            LanguageId::Java => "Main.java",
            LanguageId::Python3 => "main.py",
        }
    }

    /// `None` for interpreted languages, which need no build step.
    pub(crate) fn compile_argv(&self, cell: &Cell) -> Option<Vec<String>> {
        let tool = |p: &Option<PathBuf>| {
            p.as_ref()
                .expect("checked by plan")
                .to_string_lossy()
                .into_owned()
        };
        match self.language {
            LanguageId::Cpp17 => Some(vec![
                tool(&self.toolchain.cpp),
                "-std=c++17".into(),
                "-O2".into(),
                "-pipe".into(),
                "-o".into(),
                cell.program_path("prog"),
                cell.program_path("main.cpp"),
            ]),
            LanguageId::Java => Some(vec![
                tool(&self.toolchain.javac),
                "-encoding".into(),
                "UTF-8".into(),
                "-d".into(),
                cell.program_path(""),
                cell.program_path("Main.java"),
            ]),
            LanguageId::Python3 => None,
        }
    }

    pub(crate) fn run_argv(&self, cell: &Cell, limits: &RunLimits) -> Vec<String> {
        let tool = |p: &Option<PathBuf>| {
            p.as_ref()
                .expect("checked by plan")
                .to_string_lossy()
                .into_owned()
        };
        match self.language {
            LanguageId::Cpp17 => vec![cell.program_path("prog")],
            LanguageId::Java => vec![
                tool(&self.toolchain.java),
                format!("-Xmx{}m", limits.memory_limit_mib),
                "-Xss64m".into(),
                "-cp".into(),
                cell.program_path(""),
                "Main".into(),
            ],
            LanguageId::Python3 => vec![tool(&self.toolchain.python), cell.program_path("main.py")],
        }
    }
}

pub(crate) fn compile_limits() -> ProcLimits {
    ProcLimits {
        cpu_ms: 30_000,
        wall_ms: 60_000,
        address_space: None,
        stack: None,
        output_cap: 64 << 10,
        max_file_size: 256 * MIB,
        max_processes: 64,
    }
}

/// Address space is capped at twice the memory limit so that an overrun
/// shows up in peak RSS before allocation starts failing. The JVM reserves
/// far more virtual memory than it uses, so Java relies on `-Xmx` instead.
pub(crate) fn run_limits(language: LanguageId, limits: &RunLimits) -> ProcLimits {
    let memory = limits.memory_limit_mib * MIB;
    let (address_space, stack) = match language {
        LanguageId::Cpp17 => (Some(2 * memory), Some(memory)),
        LanguageId::Python3 => (Some(2 * memory), None),
        LanguageId::Java => (None, None),
    };
    ProcLimits {
        cpu_ms: limits.time_limit_ms,
        wall_ms: 2 * limits.time_limit_ms,
        address_space,
        stack,
        output_cap: limits.output_cap_bytes,
        max_file_size: 64 * MIB,
        max_processes: 64,
    }
}
