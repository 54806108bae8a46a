"""Loading detector classes from descriptors and selecting them by version."""
import importlib
import logging
from bisect import bisect_left
from typing import Dict, List, Any, Optional, TypeVar, Type, Tuple

from packaging.specifiers import SpecifierSet

from scenemap.descriptor import Descriptor, _VersionEntry
from scenemap.exceptions import InvalidParameterException

logger = logging.getLogger(__name__)

T = TypeVar('T')

Store = Dict[str, List[_VersionEntry[T]]]


def _import_class(fqn: str) -> Tuple[Any, Any]:
    module_name, _, cls_name = fqn.rpartition('.')
    module = importlib.import_module(module_name)
    return module, getattr(module, cls_name)


def _register_plugin(desc: Descriptor, kind: str, store: 'Store[T]') -> None:
    """
    Registers a class through a :class:`~scenemap.descriptor.Descriptor`.

    Import failures are not raised here. They are kept in the entry and reported when the plugin
    is requested, so that a broken third-party detector does not prevent the others from loading.

    :param desc: A descriptor whose `cls` property names the class to register.
    :param kind: The kind of plugin being registered, used in messages.
    :param store: The registry, mapping lower case names to entries sorted by version.
    """
    cls: Optional[Type[T]] = None
    error = None
    module_path = None
    try:
        module, cls = _import_class(desc.cls)
        module_path = getattr(module, '__file__', None)
    except Exception as ex:
        logger.info('Cannot load %s %s: %s', kind, desc.name, ex)
        error = ex

    entry: _VersionEntry[T] = _VersionEntry(desc, module_path, cls, error)
    for name in [desc.name] + list(desc.aliases or []):
        _insert(store, name.lower(), kind, entry)


def _insert(store: 'Store[T]', name: str, kind: str, entry: _VersionEntry[T]) -> None:
    entries = store.setdefault(name, [])
    i = bisect_left(entries, entry)
    if i < len(entries) and entries[i].version == entry.version:
        if entries[i].desc.cls == entry.desc.cls:
            # the same descriptor reached through two sys.path entries
            return
        raise InvalidParameterException('A %s named "%s" with version %s is already '
                                        'registered (%s); cannot register %s'
                                        % (kind, name, entry.version, entries[i].desc.cls,
                                           entry.desc.cls))
    entries.insert(i, entry)


def _get_names(store: Dict[str, Any]) -> str:
    # names starting with an underscore are hidden
    return ', '.join(sorted(name for name in store if not name.startswith('_')))


def _get_plugin_class(name: str, version_constraint: Optional[str], kind: str,
                      store: 'Store[T]') -> _VersionEntry[T]:
    entries = store.get(name.lower())
    if not entries:
        raise InvalidParameterException('No such %s "%s". Available %ss: %s'
                                        % (kind, name, kind, _get_names(store)))
    if version_constraint:
        spec = SpecifierSet(version_constraint)
        matching = [e for e in entries if e.version in spec]
        if not matching:
            raise InvalidParameterException('No %s "%s" found to satisfy "%s"'
                                            % (kind, name, version_constraint))
        selected = matching[-1]
    else:
        selected = entries[-1]
    if selected.error is not None:
        raise InvalidParameterException('Unable to load %s %s' % (kind, name),
                                        exception=selected.error)
    return selected
