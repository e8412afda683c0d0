from setuptools import setup, find_packages


def parse_requirements(filename):
    with open(filename, 'r') as f:
        return [line.strip() for line in f if line.strip() and not line.startswith('#')]


setup(
    name='openphase',
    version='0.1.0',
    packages=find_packages(exclude=('tests', 'tests.*')),
    description='Steady-state phase diagrams of open qubit chains from imaginary-Liouville spectra.',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    include_package_data=True,
    python_requires=">=3.10, <4",
    install_requires=parse_requirements('requirements.txt'),
    entry_points={
        'console_scripts': [
            'openphase=openphase.cli:main',
        ],
    },
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)
