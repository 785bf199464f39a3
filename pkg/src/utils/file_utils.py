"""
File utilities for linfdiff documents
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

from .logger import LinfDiffLogger
from .exceptions import OutputException, SchemaViolation


def dumps(data: Any, indent: int = 2) -> str:
    """Deterministic JSON text; documents are built in a fixed key order"""
    return json.dumps(data, indent=indent, ensure_ascii=False) + "\n"


class FileHandler:
    """Reads input documents and writes results below ``output_dir``

    Absolute filenames bypass ``output_dir``.
    """

    def __init__(self, output_dir: str = "output", logger: Optional[LinfDiffLogger] = None, indent: int = 2):
        self.output_dir = Path(output_dir)
        self.logger = logger
        self.indent = indent

    def _ensure_dir(self, directory: Path):
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputException(f"Failed to create output directory: {str(e)}")

    def resolve(self, filename: str) -> Path:
        return self.output_dir / filename

    def generate_filename(self, prefix: str, extension: str, include_timestamp: bool = False) -> str:
        """Generate filename with optional timestamp"""
        if include_timestamp:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            return f"{prefix}_{timestamp}.{extension}"
        return f"{prefix}.{extension}"

    def save_json(self, data: Any, filename: str) -> str:
        """Save data as JSON file and return its path"""
        file_path = self.resolve(filename)
        self._ensure_dir(file_path.parent)
        try:
            with open(file_path, 'w', encoding='utf-8') as f:
                f.write(dumps(data, self.indent))
        except OSError as e:
            raise OutputException(f"Failed to save JSON file: {str(e)}")

        if self.logger:
            self.logger.info(f"JSON file saved: {file_path}")
        return str(file_path)

    def load_json(self, filename: str) -> Any:
        """Load data from a JSON file given relative to the working directory or absolute"""
        try:
            with open(Path(filename), 'r', encoding='utf-8') as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaViolation(f"<root>: {filename} is not valid JSON ({e.msg} at line {e.lineno})")
        except OSError as e:
            raise OutputException(f"Failed to load JSON file: {str(e)}")

    def file_exists(self, filename: str) -> bool:
        return self.resolve(filename).exists()
