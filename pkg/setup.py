#!/usr/bin/env python
# -*- coding: utf-8 -*-


import setuptools


with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read().replace('.. :changelog:', '')

requirements = [
    'numpy>=1.20',
    'scipy>=1.7',
    'pandas>=1.3',
    'PyYAML>=5.1',
]

setuptools.setup(
    name = 'rvqite-lab',
    version = '1.0.0',
    description = "rvqite-lab - regularized variational imaginary-time evolution of the lattice Schwinger model",
    long_description = readme + '\n\n' + history,
    long_description_content_type="text/x-rst",
    packages = [
        'rvqite',
    ],
    package_dir = {'': 'lib'},
    include_package_data = True,
    install_requires = requirements,
    entry_points = {
        'console_scripts': [
            'rvqite-lab = rvqite.cli:main',
        ],
    },
    license = "MIT",
    zip_safe = True,
    keywords = ['quantum', 'imaginary-time evolution', 'variational', 'Schwinger model', 'lattice gauge theory'],
    classifiers = [
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Operating System :: POSIX',
        'Operating System :: MacOS :: MacOS X',
        'Topic :: Scientific/Engineering :: Physics'
    ],
    python_requires='>=3.8',
)
