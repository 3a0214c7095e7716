"""
Exception hierarchy shared by every workbench module
"""


class WorkbenchError(Exception):
    """Base class for all workbench failures"""


class StructureError(WorkbenchError, ValueError):
    """Malformed input: bad tables, non-equivariant maps, level mismatches"""


class SchemaError(StructureError):
    """JSON document with a missing or unsupported schema version"""


class UnsupportedOperation(WorkbenchError):
    """The operation exists but is not available for this value"""


class InconsistencyError(WorkbenchError):
    """An internal cross-check failed; indicates a bug, not bad input"""


class SearchCapExceeded(WorkbenchError):
    """An exhaustive enumeration would exceed its configured cap"""
