"""The built-in scene detectors."""
from scenemap.detectors.adaptive import detect_adaptive, AdaptiveDetector
from scenemap.detectors.content import detect_content, ContentDetector
from scenemap.detectors.fallback import detect_fallback, FallbackDetector
from scenemap.detectors.regular import detect_regular, RegularSplitDetector

__all__ = ['detect_adaptive', 'detect_content', 'detect_fallback', 'detect_regular',
           'AdaptiveDetector', 'ContentDetector', 'FallbackDetector', 'RegularSplitDetector']
