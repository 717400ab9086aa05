class MFDKError(ValueError):
    pass


class InputError(MFDKError):
    """Malformed caller input. The CLI maps this to exit status 2."""


class ExpressionError(InputError):
    def __init__(self, message, text=None, column=None):
        self.text = text
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class UnknownVariableError(InputError):
    def __init__(self, name, where=None):
        self.name = name
        where = f" in {where}" if where else ""
        super().__init__(f"Unknown variable `{name}`{where}")


class DocumentError(InputError):
    def __init__(self, errors):
        # errors: list of (path, line, column, message); line/column may be None
        self.errors = list(errors)
        lines = []
        for path, line, column, message in self.errors:
            location = path or "<document>"
            if line is not None:
                location += f":{line}"
                if column is not None:
                    location += f":{column}"
            lines.append(f"{location}: {message}")
        super().__init__("\n".join(lines))


class VerificationError(MFDKError):
    """A checked identity failed. The CLI maps this to exit status 1."""


class ChainMapError(VerificationError):
    def __init__(self, generator, message=None):
        self.generator = generator
        super().__init__(
            message or f"Map does not commute with the differentials on generator `{generator}`"
        )


class WitnessError(VerificationError):
    pass


class ConsistencyError(MFDKError, AssertionError):
    pass
