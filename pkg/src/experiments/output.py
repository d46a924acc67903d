"""Terminal output and formatting for run summaries."""

import os
import sys
from typing import Optional

from colorama import Fore, Style, just_fix_windows_console


class OutputFormatter:
    """Handles text output with formatting and colors."""

    def __init__(self, use_colors: bool = True, stream=None):
        """
        Initialize output formatter.

        Args:
            use_colors: Whether to use ANSI colors
            stream: Where to write (defaults to stdout)
        """
        self.stream = stream if stream is not None else sys.stdout
        self.use_colors = use_colors and self._supports_color()
        if self.use_colors:
            just_fix_windows_console()

    def _supports_color(self) -> bool:
        """
        Check if the output stream supports colors.

        Returns:
            True if colors are supported
        """
        if not hasattr(self.stream, 'isatty') or not self.stream.isatty():
            return False

        if os.environ.get('NO_COLOR'):
            return False

        return True

    def colorize(self, text: str, color: str, style: Optional[str] = None) -> str:
        """
        Apply color and style to text.

        Args:
            text: Text to colorize
            color: colorama Fore code
            style: Optional colorama Style code

        Returns:
            Formatted text string
        """
        if not self.use_colors:
            return text

        result = color
        if style:
            result += style
        return result + text + Style.RESET_ALL

    def print_colored(self, text: str, color: str, style: Optional[str] = None) -> None:
        print(self.colorize(text, color, style), file=self.stream)

    def print_title(self, text: str) -> None:
        width = 60
        border = "=" * width

        self.print_colored(border, Fore.CYAN, Style.BRIGHT)
        self.print_colored(text.center(width), Fore.CYAN, Style.BRIGHT)
        self.print_colored(border, Fore.CYAN, Style.BRIGHT)

    def print_section(self, text: str) -> None:
        print(file=self.stream)
        self.print_colored(text, Fore.YELLOW, Style.BRIGHT)
        self.print_colored("-" * len(text), Fore.YELLOW)

    def print_error(self, text: str) -> None:
        self.print_colored(f"ERROR: {text}", Fore.RED, Style.BRIGHT)

    def print_success(self, text: str) -> None:
        self.print_colored(f"PASS {text}", Fore.GREEN, Style.BRIGHT)

    def print_failure(self, text: str) -> None:
        self.print_colored(f"FAIL {text}", Fore.RED, Style.BRIGHT)

    def print_warning(self, text: str) -> None:
        self.print_colored(f"WARN {text}", Fore.YELLOW)

    def print_info(self, text: str) -> None:
        self.print_colored(text, Fore.CYAN)

    def print_stats(self, stats: dict) -> None:
        """
        Print key/value pairs aligned on the key column.

        Args:
            stats: Dictionary of name to value
        """
        max_key_length = max(len(k) for k in stats.keys()) if stats else 0

        for key, value in stats.items():
            label = self.colorize(f"  {key.ljust(max_key_length)}: ", Fore.CYAN)
            print(f"{label}{value}", file=self.stream)
