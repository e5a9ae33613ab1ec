import os

from fundgroup.domain.errors import ParseError
from fundgroup.features.bratteli.models import BratteliDiagram
from fundgroup.infrastructure.loaders.algebra_file import AlgebraFileLoader, ModelFile
from fundgroup.infrastructure.loaders.bratteli_file import BratteliFileLoader
from fundgroup.kernel.system.paths import resolve_input_path


class LoaderFactory:
    """
    Resolves input paths (bundled samples included) and picks the loader by extension.
    """

    def __init__(self) -> None:
        self._models = AlgebraFileLoader()
        self._diagrams = BratteliFileLoader()

    def load_model(self, file_path: str) -> ModelFile:
        return self._models.load(self._resolve(file_path))

    def load_diagram(self, file_path: str) -> BratteliDiagram:
        return self._diagrams.load(self._resolve(file_path))

    @staticmethod
    def _resolve(file_path: str) -> str:
        path = resolve_input_path(file_path)
        if not os.path.exists(path):
            raise ParseError(f"no such file: '{file_path}'")
        return path


loader_factory = LoaderFactory()
