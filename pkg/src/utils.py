import os
from pathlib import Path
from typing import NoReturn

from rapidfuzz import fuzz, process
from rapidfuzz.utils import default_process

KB_EXTENSIONS = {".kb"}


class KbsimError(Exception):
    pass


class UsageError(KbsimError):
    pass


class InputFileError(KbsimError):
    pass


class UnknownKnowledgeError(KbsimError):
    def __init__(self, message: str, suggestions: list[str] | None = None):
        super().__init__(message)
        self.suggestions = suggestions or []


class SameKnowledgeComparisonError(KbsimError):
    pass


class TooFewKnowledgesError(KbsimError):
    pass


class DirectionalModeSpaceError(KbsimError):
    pass


class NotIdentifiableError(KbsimError):
    pass


def make_error(error_text: str, error_type: type[KbsimError] = KbsimError) -> NoReturn:
    raise error_type(error_text)


def is_file_writeable(path: Path) -> bool:
    if path.exists():
        return os.access(path, os.W_OK)
    parent_dir = path.parent
    return os.access(parent_dir, os.W_OK)


def suggest_names(
    target: str, candidates: list[str], threshold: int = 60, take_n: int = 3
) -> list[str]:
    """
    Rank candidate names by fuzzy similarity to the target.

    Args:
        target: The name that was not found
        candidates: Names that do exist
        threshold: Similarity threshold (0 to 100), scored ignoring case
        take_n: Maximum number of suggestions

    Returns:
        Candidate names, best match first
    """
    matches = process.extract(
        target,
        candidates,
        scorer=fuzz.ratio,
        processor=default_process,
        score_cutoff=threshold,
        limit=take_n,
    )
    return [name for name, _, _ in matches]


def find_similar_filenames(
    target_file: str, directory: Path, threshold: int = 70
) -> list[tuple[Path, float]]:
    """List files in `directory` whose names look like a knowledge base path that was not found.

    Args:
        target_file: Path the user asked for; only its basename is compared
        directory: Where to look for look-alikes
        threshold: Minimum token-sort ratio to report a candidate

    Returns:
        Candidates with their scores, best match first
    """
    target_filename = os.path.basename(target_file)
    similar_files = []
    for entry in directory.iterdir():
        if not entry.is_file() or entry.name == target_filename:
            continue
        similarity = fuzz.token_sort_ratio(target_filename, entry.name)
        if similarity >= threshold:
            similar_files.append((entry, similarity))

    similar_files.sort(key=lambda x: (-x[1], x[0].name))
    return similar_files


def check_kb_file(path: Path) -> bool:
    return path.suffix.lower() in KB_EXTENSIONS


def handle_input_file(file_path: str) -> Path:
    path = Path(os.path.expanduser(file_path))
    if not path.exists() and path.parent.exists():
        similar_files = [
            candidate
            for candidate, _ in find_similar_filenames(path.name, path.parent)[:5]
            if check_kb_file(candidate)
        ]
        if similar_files:
            similar_files_formatted = ", ".join(str(file) for file in similar_files)
            make_error(
                f"File ({path}) does not exist. Did you mean any of these files: "
                f"{similar_files_formatted}?",
                InputFileError,
            )
        make_error(f"File ({path}) does not exist", InputFileError)
    elif not path.exists():
        make_error(f"File ({path}) does not exist", InputFileError)
    elif not path.is_file():
        make_error(f"File ({path}) is not a file", InputFileError)
    return path


def read_input_file(path: Path) -> str:
    try:
        # universal newlines fold CRLF into LF; utf-8-sig drops a leading BOM
        return path.read_text(encoding="utf-8-sig")
    except UnicodeDecodeError as e:
        make_error(f"File ({path}) is not valid UTF-8: {e}", InputFileError)
    except OSError as e:
        make_error(f"Error reading file ({path}): {e}", InputFileError)
