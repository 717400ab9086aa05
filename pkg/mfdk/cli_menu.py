import argparse
from dataclasses import dataclass, field

import regex as re


def _sanitize(name):
    return re.sub("[^0-9a-zA-Z]+", "_", name.strip())


def _split_params(params):
    """
    Strips and sanitizes parameter names. A trailing `(bool)` marks a true/false
    flag instead of a parameter that captures a value.
    """
    names, flags = {}, set()
    for key, value in (params or {}).items():
        key = key.strip()
        is_flag = key.endswith("(bool)")
        name = _sanitize(key.replace("(bool)", ""))
        names[name] = value
        if is_flag:
            flags.add(name)
    return names, flags


@dataclass
class Verb:
    command: str
    verb: str
    help: str
    callback: object
    required_params: dict = field(default_factory=dict)
    optional_params: dict = field(default_factory=dict)


@dataclass
class Selection:
    verb: Verb
    params: dict
    globals: dict


class CommandMenu(object):
    """
    `<prog> <command> <verb> [--param value ...]`. Verbs register their
    required and optional parameters; global parameters are accepted with
    every verb and passed separately.
    """

    def __init__(self, prog="mfdk"):
        # Disable the default `-h`/`--help` so both levels of help come from the menu
        self._parser = argparse.ArgumentParser(prog=prog, add_help=False)
        self._parser.add_argument("command", nargs="?")
        self._parser.add_argument("verb", nargs="?")
        self._parser.add_argument("--help", action="store_true")
        self.prog = prog
        self._all_parameters = {"help"}
        self._flags = set()
        self._commands = {}
        self._command_help = {}
        self._global_params = {}

    def _register(self, names, flags):
        for name in names:
            if name in self._all_parameters:
                if (name in flags) != (name in self._flags):
                    raise ValueError(f"Parameter `--{name}` is registered both as a flag and as a value")
                continue
            self._all_parameters.add(name)
            if name in flags:
                self._flags.add(name)
                self._parser.add_argument(f"--{name}", action="store_true")
            else:
                self._parser.add_argument(f"--{name}")

    def add_global_params(self, params):
        names, flags = _split_params(params)
        self._register(names, flags)
        self._global_params.update(names)

    def add_command(self, command, help=None):
        command = _sanitize(command)
        self._commands.setdefault(command, {})
        self._command_help[command] = help or ""

    def add_verb(self, command, verb, help=None, callback=None, required_params=None, optional_params=None):
        """
        Adds `<command> <verb>`. When selected, the required and optional
        parameters the user passed are handed to `callback` as keyword
        arguments (hyphens in names become underscores); required parameters
        are checked for presence, all further validation is the callback's.
        """
        if callback is None:
            raise ValueError("Missing required parameter `callback`")
        command = _sanitize(command)
        if command not in self._commands:
            self.add_command(command)
        if verb in self._commands[command]:
            raise ValueError(f"Verb `{command} {verb}` has already been added")
        required, required_flags = _split_params(required_params)
        optional, optional_flags = _split_params(optional_params)
        overlapping = set(required) & set(optional)
        if overlapping:
            raise ValueError(
                f"Parameters [`--{'`, `--'.join(sorted(overlapping))}`] are in both `required_params` and `optional_params`"
            )
        self._register(required, required_flags)
        self._register(optional, optional_flags)
        self._commands[command][verb] = Verb(command, verb, help or "", callback, required, optional)

    def help_text(self, command=None, verb=None):
        if command is None:
            output = f"\nUsage: {self.prog} <command> <verb> [--param value ...]\n\nCommands:\n"
            for name, help in self._command_help.items():
                verbs = ", ".join(self._commands[name])
                output += f"  {name}: {help} ({verbs})\n"
            output += "\nGlobal parameters:\n"
            for name, help in self._global_params.items():
                output += f"  --{name}: {help}\n"
            return output
        if verb is None:
            output = f"\n{command}: {self._command_help.get(command, '')}\n\n"
            for option in self._commands[command].values():
                output += f"  {command} {option.verb}: {option.help}\n"
            return output
        option = self._commands[command][verb]
        output = f"\nHelp for `{command} {verb}`: {option.help}\n"
        if option.required_params:
            output += "\nRequired parameters:\n"
            for name, help in option.required_params.items():
                output += f"  --{name}: {help}\n"
        if option.optional_params:
            output += "\nOptional parameters:\n"
            for name, help in option.optional_params.items():
                output += f"  --{name}: {help}\n"
        return output

    def parse(self, argv=None):
        """
        The selected verb with its parameters, or a help text when `--help`
        was passed. Misuse raises ValueError.
        """
        if not self._commands:
            raise ValueError("Cannot parse arguments because no commands have been added")
        args, unknown = self._parser.parse_known_args(argv)
        if unknown:
            raise ValueError(f"Unrecognized arguments: {' '.join(unknown)}")
        command, verb = args.command, args.verb
        if command is not None and command not in self._commands:
            raise ValueError(f"Unknown command `{command}`; expected one of [{', '.join(self._commands)}]")
        if verb is not None and verb not in self._commands[command]:
            raise ValueError(
                f"Unknown verb `{command} {verb}`; expected one of [{', '.join(self._commands[command])}]"
            )
        if args.help or command is None:
            if command is None and not args.help:
                raise ValueError(f"A command is required. Should be one of [{', '.join(self._commands)}]")
            return self.help_text(command, verb)
        if verb is None:
            raise ValueError(f"A verb is required for `{command}`: one of [{', '.join(self._commands[command])}]")

        option = self._commands[command][verb]
        allowed = set(option.required_params) | set(option.optional_params)
        stray = sorted(
            name
            for name in self._all_parameters - allowed - set(self._global_params) - {"help"}
            if getattr(args, name, None)
        )
        if stray:
            raise ValueError(f"`{command} {verb}` does not take [`--{'`, `--'.join(stray)}`]")
        missing = [name for name in option.required_params if getattr(args, name, None) in (None, False)]
        if missing:
            raise ValueError(f"Missing required parameters `--{'`, `--'.join(missing)}`")
        params = {}
        for name in list(option.required_params) + list(option.optional_params):
            value = getattr(args, name, None)
            if value not in (None, False):
                params[name] = value
        global_values = {name: getattr(args, name, None) for name in self._global_params}
        return Selection(option, params, global_values)
