from packaging.version import Version
from scenemap.descriptor import Descriptor

__SCENEMAP_DETECTORS__ = [
    Descriptor(name='content', nice_name='Content', version=Version('0.1.0'),
               cls='scenemap.detectors.content.ContentDetector'),
    Descriptor(name='adaptive', nice_name='Adaptive', version=Version('0.1.0'),
               cls='scenemap.detectors.adaptive.AdaptiveDetector'),
    Descriptor(name='fallback', nice_name='Adaptive with content fallback',
               version=Version('0.1.0'), cls='scenemap.detectors.fallback.FallbackDetector'),
    Descriptor(name='regular_split', nice_name='Regular split', version=Version('0.1.0'),
               cls='scenemap.detectors.regular.RegularSplitDetector', aliases=['regular']),
]
