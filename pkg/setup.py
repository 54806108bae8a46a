from setuptools import setup, find_packages

with open("src/scenemap/version.py") as f:
    exec(f.read())


if __name__ == '__main__':
    with open('requirements.txt') as f:
        install_requires = f.readlines()

    with open('README.md') as f:
        long_description = f.read()

    setup(
        name='scenemap-python',
        version=VERSION,

        description='''Duration-aware video scene segmentation and keyframe selection.''',
        long_description=long_description,
        long_description_content_type='text/markdown',

        classifiers=[
            'Programming Language :: Python :: 3',
            'License :: OSI Approved :: MIT License',
            'Topic :: Multimedia :: Video',
        ],


        packages=find_packages(where='src') + ['scenemap-descriptors'],
        package_dir={'': 'src'},

        package_data={
            '': ['README.md', 'LICENSE'],
            'scenemap': ['py.typed', 'templates/*.mustache'],
        },

        scripts=[],

        entry_points={
            'console_scripts': ['scenemap = scenemap.cli:main'],
        },

        install_requires=install_requires,
        python_requires='>=3.8'
    )
