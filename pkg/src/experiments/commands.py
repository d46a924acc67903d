"""Subcommand definitions and registry."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional


class CommandCategory(Enum):
    """Categories of commands."""
    FIGURES = "Figure sweeps"
    ANALYSIS = "Analysis"
    CHECKS = "Checks"


@dataclass
class CommandDefinition:
    """Definition of a CLI subcommand."""
    name: str
    description: str
    category: CommandCategory
    handler: Callable
    aliases: List[str] = field(default_factory=list)
    usage: str = ""
    examples: List[str] = field(default_factory=list)

    def matches(self, action: str) -> bool:
        """
        Check if action matches this command.

        Args:
            action: Action string to check

        Returns:
            True if action matches command name or aliases
        """
        action_lower = action.lower()
        return action_lower == self.name or action_lower in self.aliases

    def help_text(self) -> str:
        """Description, usage line, aliases and examples for --help."""
        lines = [self.description, "", f"usage: python main.py {self.usage}"]
        if self.aliases:
            lines.append(f"also: {', '.join(self.aliases)}")
        if self.examples:
            lines += ["", "examples:"] + [f"  python main.py {example}" for example in self.examples]
        return "\n".join(lines)


class CommandRegistry:
    """Registry of available subcommands."""

    def __init__(self):
        self.commands: Dict[str, CommandDefinition] = {}

    def register(self, command: CommandDefinition) -> None:
        if command.name in self.commands:
            raise ValueError(f"Command already registered: {command.name}")
        self.commands[command.name] = command

    def get_command(self, action: str) -> Optional[CommandDefinition]:
        """
        Get command definition by name or alias.

        Returns:
            CommandDefinition if found, None otherwise
        """
        action_lower = action.lower()

        if action_lower in self.commands:
            return self.commands[action_lower]

        for cmd in self.commands.values():
            if cmd.matches(action_lower):
                return cmd

        return None

    def get_commands_by_category(self, category: CommandCategory) -> List[CommandDefinition]:
        return [cmd for cmd in self.commands.values() if cmd.category == category]

    def format_help(self, command_name: Optional[str] = None) -> str:
        """Overview of every command, or the help block of one."""
        if command_name:
            cmd = self.get_command(command_name)
            return cmd.help_text() if cmd else f"Unknown command: {command_name}"

        lines = ["Available commands:", ""]
        for category in CommandCategory:
            cmds = self.get_commands_by_category(category)
            if cmds:
                lines.append(f"{category.value}:")
                for cmd in sorted(cmds, key=lambda c: c.name):
                    alias_text = f" ({', '.join(cmd.aliases)})" if cmd.aliases else ""
                    lines.append(f"  {cmd.name}{alias_text} - {cmd.description}")
                lines.append("")
        return "\n".join(lines).rstrip()
