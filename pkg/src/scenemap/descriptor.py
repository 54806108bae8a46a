"""Detector descriptors and registry entries."""
from functools import total_ordering
from typing import TypeVar, Generic, Optional, Type, List

from packaging.version import Version

T = TypeVar('T')


@total_ordering
class _VersionEntry(Generic[T]):
    # A registered version of a plugin; entries of the same name are kept sorted by version.
    def __init__(self, desc: 'Descriptor', module_path: Optional[str] = None,
                 cls: Optional[Type[T]] = None, error: Optional[Exception] = None) -> None:
        self.desc = desc
        self.module_path = module_path
        self.cls = cls
        self.error = error

    @property
    def version(self) -> Version:
        return self.desc.version

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _VersionEntry) and self.version == other.version

    def __lt__(self, other: '_VersionEntry[T]') -> bool:
        return self.version < other.version

    def __repr__(self) -> str:
        return '_VersionEntry(%s, %s)' % (self.desc.name, self.version)


class Descriptor(object):
    """
    This class is used to enable scenemap to discover and register scene detectors.

    Packages wanting to register detectors must place instances of this class in a global
    module list named `__SCENEMAP_DETECTORS__` in a module placed in the `scenemap-descriptors`
    *namespace package*, such as:

    .. code-block:: none

        <project_root>/
            src/
                scenemap-descriptors/
                    descriptors_for_project.py

    The `scenemap-descriptors` directory must not contain an `__init__.py` file, so that Python
    treats it as a namespace package and all such directories on the library search path are
    scanned.

    The contents of `descriptors_for_project.py` could then be as follows:

    .. code-block:: python

        from packaging.version import Version
        from scenemap.descriptor import Descriptor

        __SCENEMAP_DETECTORS__ = [
            Descriptor(name=<name>, version=Version(<version_str>), cls=<fqn_str>),
            ...
        ]

    where `<name>` is the name used with :meth:`~scenemap.detector.SceneDetector.get_instance`
    and with the `strategy` field of policy rules, and `<fqn_str>` is the fully qualified name of
    a :class:`~scenemap.detector.SceneDetector` subclass, such as
    `scenemap.detectors.content.ContentDetector`.
    """

    def __init__(self, name: str, version: Version, cls: str,
                 aliases: Optional[List[str]] = None, nice_name: Optional[str] = None) -> None:
        """
        :param name: The name under which the detector is registered.
        :param version: The version of the detector. Multiple versions can be registered under a
            single name; the highest one is used unless a version constraint is given.
        :param cls: The fully qualified name of the class implementing the detector.
        :param aliases: Alternative names under which the detector is also available.
        :param nice_name: A name suitable for display, which defaults to `name`.
        """
        self.name = name
        self.version = version
        self.cls = cls
        self.path: Optional[str] = None
        self.aliases = aliases
        self.nice_name = nice_name if nice_name is not None else name

    def __repr__(self) -> str:
        """Returns a string representation of this descriptor."""
        return 'Descriptor(name=%s, version=%s, path=%s)' % (self.name, self.version, self.path)
