"""Exception hierarchy shared by every package.

Each class carries the exit code the command line front end returns when
the error escapes a command.
"""


class AvdbError(Exception):
    exit_code = 1


# Images

class ImageError(AvdbError):
    exit_code = 3


class MalformedImage(ImageError, ValueError):
    pass


class UnsupportedFormat(ImageError, ValueError):
    pass


class NotGrayscale(ImageError, ValueError):
    pass


# Datasets

class DatasetError(AvdbError):
    exit_code = 3


class EmptyClass(DatasetError):
    pass


class EmptyDataset(DatasetError):
    pass


class SingleClassDataset(DatasetError):
    pass


class ImageLoadError(DatasetError):
    def __init__(self, filename, cause):
        self.filename = str(filename)
        self.cause = cause
        super().__init__(f"{self.filename}: {cause}")


# Configuration

class ConfigError(AvdbError, ValueError):
    exit_code = 4


class KTooLarge(ConfigError):
    pass


# Shapes and dimensions

class ShapeError(AvdbError, ValueError):
    exit_code = 5


class DimMismatch(ShapeError):
    pass


class SizeMismatch(ShapeError):
    pass


class ChannelMismatch(ShapeError):
    pass


class OddDims(ShapeError):
    pass


class ImageTooSmall(ShapeError):
    pass


class DimsNotDivisible(ShapeError):
    pass


class BadTarget(ShapeError):
    pass


# Model files

class ContainerError(AvdbError):
    exit_code = 5


# Evaluation

class EvaluationError(AvdbError, ValueError):
    exit_code = 1


class LengthMismatch(EvaluationError):
    pass


class EmptyEvaluation(EvaluationError):
    pass


# Command line

class UsageError(AvdbError):
    exit_code = 2
